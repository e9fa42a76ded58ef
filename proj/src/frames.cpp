#include "mframes/frames.hpp"

#include <algorithm>
#include <cmath>

namespace mframes {

std::string frame_class_name(FrameClass c) {
  switch (c) {
    case FrameClass::not_bessel: return "not_bessel";
    case FrameClass::bessel_only: return "bessel_only";
    case FrameClass::k_frame: return "k_frame";
    case FrameClass::tight_k_frame: return "tight_k_frame";
    case FrameClass::parseval_k_frame: return "parseval_k_frame";
    case FrameClass::operator_frame: return "operator_frame";
  }
  return "unknown";
}

AlgebraElement frame_integral(const OperatorFamily& family, const ModuleVector& x) {
  AlgebraElement acc = AlgebraElement::zero(x.shape());
  for (int k = 0; k < family.size(); ++k) {
    const ModuleVector tx = family.op(k).apply(x);
    acc = acc + mod_inner(tx, tx).scaled(family.disc().atoms[static_cast<size_t>(k)].weight);
  }
  return acc;
}

ModuleOperator frame_operator(const OperatorFamily& family) {
  ModuleOperator s = ModuleOperator::zero(family.shape(), family.rank());
  for (int k = 0; k < family.size(); ++k) {
    const ModuleOperator& t = family.op(k);
    s = s + compose(t.adjoint(), t).scaled(family.disc().atoms[static_cast<size_t>(k)].weight);
  }
  return s;
}

L2Vector analysis(const OperatorFamily& family, const ModuleVector& x) {
  std::vector<ModuleVector> entries;
  entries.reserve(static_cast<size_t>(family.size()));
  for (int k = 0; k < family.size(); ++k) entries.push_back(family.op(k).apply(x));
  return L2Vector(family.disc(), std::move(entries));
}

ModuleVector synthesis(const OperatorFamily& family, const L2Vector& yf) {
  if (!family.disc().aligned_with(yf.disc()))
    throw StructuralError("l2 vector is not aligned with the family");
  ModuleVector acc = ModuleVector::zero(family.shape(), family.rank());
  for (int k = 0; k < family.size(); ++k) {
    const double w = family.disc().atoms[static_cast<size_t>(k)].weight;
    acc = acc + family.op(k).adjoint().apply(yf.entry(k)).scaled(w);
  }
  return acc;
}

namespace {

Eigen::MatrixXcd rep_kkstar(const ModuleOperator& k) {
  const Eigen::MatrixXcd kr = op_rep(k);
  return kr * kr.adjoint();
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.isZero(0.0)) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

FrameBounds optimal_bounds(const OperatorFamily& family, const ModuleOperator& k,
                           double tol) {
  if (!(family.shape() == k.shape()) || family.rank() != k.rank())
    throw StructuralError("family and K have mismatched shape or rank");
  const ModuleOperator s = frame_operator(family);
  const Eigen::MatrixXcd m = op_rep(s);
  const Eigen::MatrixXcd n = rep_kkstar(k);

  FrameBounds bounds;
  bounds.upper_opt = std::max(0.0, hermitian_max_eig(m));
  bounds.margin_upper = hermitian_min_eig(
      bounds.upper_opt * Eigen::MatrixXcd::Identity(m.rows(), m.cols()) - m);

  const double n_norm = spectral_norm(n);
  if (n_norm == 0.0) {
    bounds.lower_opt = LowerBound::unbounded();
    bounds.margin_lower = hermitian_min_eig(m);
    return bounds;
  }
  // Range obstruction: mass of KK* outside range(S).
  const Eigen::MatrixXcd proj = psd_range_projection(m);
  const Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  const double leak = spectral_norm((ident - proj) * n * (ident - proj));
  if (leak > tol * n_norm) {
    bounds.lower_opt = LowerBound::none();
    bounds.margin_lower = 0.0;
    return bounds;
  }
  const Eigen::MatrixXcd m_pinv_sqrt = psd_pinv_sqrt(m);
  const double top = hermitian_max_eig(m_pinv_sqrt * n * m_pinv_sqrt);
  if (!(top > 0.0)) {  // cannot happen with n != 0 and range inclusion; guard
    bounds.lower_opt = LowerBound::none();
    return bounds;
  }
  const double lower = 1.0 / top;
  bounds.lower_opt = LowerBound::of(lower);
  bounds.margin_lower = hermitian_min_eig(m - lower * n);
  return bounds;
}

LowerBound optimal_lower_bisection(const OperatorFamily& family, const ModuleOperator& k,
                                   double tol) {
  const ModuleOperator s = frame_operator(family);
  const Eigen::MatrixXcd m = op_rep(s);
  const Eigen::MatrixXcd n = rep_kkstar(k);
  const double m_norm = spectral_norm(m);
  const double n_norm = spectral_norm(n);
  if (n_norm == 0.0) return LowerBound::unbounded();

  const auto psd_at = [&](double a) {
    const Eigen::MatrixXcd pencil = m - a * n;
    const double scale = std::max(m_norm + a * n_norm, 1e-300);
    return hermitian_min_eig(pencil) >= -1e-10 * scale;
  };

  // a <= lambda_max(M)/lambda_max(N) for any feasible a.
  double hi = m_norm / n_norm * (1.0 + 1e-6) + 1e-12;
  if (psd_at(hi)) return LowerBound::of(hi);
  double lo = 0.0;
  while (hi - lo > tol * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    if (psd_at(mid)) lo = mid;
    else hi = mid;
  }
  return LowerBound::of(lo);
}

FrameBounds optimal_bounds_on_subspace(const OperatorFamily& family, const ModuleOperator& k,
                                       const Eigen::MatrixXcd& basis, double tol) {
  const ModuleOperator s = frame_operator(family);
  const Eigen::MatrixXcd m = basis.adjoint() * op_rep(s) * basis;
  const Eigen::MatrixXcd n = basis.adjoint() * rep_kkstar(k) * basis;

  FrameBounds bounds;
  if (basis.cols() == 0) {  // trivial subspace: everything holds vacuously
    bounds.lower_opt = LowerBound::unbounded();
    bounds.upper_opt = 0.0;
    return bounds;
  }
  bounds.upper_opt = std::max(0.0, hermitian_max_eig(m));
  bounds.margin_upper = hermitian_min_eig(
      bounds.upper_opt * Eigen::MatrixXcd::Identity(m.rows(), m.cols()) - m);
  const double n_norm = spectral_norm(n);
  if (n_norm == 0.0) {
    bounds.lower_opt = LowerBound::unbounded();
    bounds.margin_lower = hermitian_min_eig(m);
    return bounds;
  }
  const Eigen::MatrixXcd proj = psd_range_projection(m);
  const Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  const double leak = spectral_norm((ident - proj) * n * (ident - proj));
  if (leak > tol * n_norm) {
    bounds.lower_opt = LowerBound::none();
    return bounds;
  }
  const Eigen::MatrixXcd m_pinv_sqrt = psd_pinv_sqrt(m);
  const double top = hermitian_max_eig(m_pinv_sqrt * n * m_pinv_sqrt);
  if (!(top > 0.0)) {
    bounds.lower_opt = LowerBound::none();
    return bounds;
  }
  bounds.lower_opt = LowerBound::of(1.0 / top);
  bounds.margin_lower = hermitian_min_eig(m - bounds.lower_opt.value * n);
  return bounds;
}

Classification classify(const OperatorFamily& family, const ModuleOperator& k, double tol) {
  const FrameBounds bounds = optimal_bounds(family, k);
  Classification result;
  if (bounds.lower_opt.kind == LowerBound::Kind::unbounded) {
    // K = 0: the lower inequality is vacuous. Reported as a degenerate
    // k_frame; the Remark requires K != 0 for the notion to carry content.
    result.cls = FrameClass::k_frame;
    result.degenerate_k = true;
    return result;
  }
  if (bounds.lower_opt.kind == LowerBound::Kind::none || bounds.lower_opt.value <= tol) {
    result.cls = FrameClass::bessel_only;
    return result;
  }
  const double a = bounds.lower_opt.value;
  const ModuleOperator s = frame_operator(family);
  const ModuleOperator kkstar = compose(k, k.adjoint());
  const double s_norm = op_norm(s);
  const double tight_defect = op_norm(s - kkstar.scaled(a));
  if (tight_defect <= tol * std::max(s_norm, 1e-300)) {
    result.tight_constant = a;
    result.cls = (std::abs(a - 1.0) <= tol) ? FrameClass::parseval_k_frame
                                            : FrameClass::tight_k_frame;
    return result;
  }
  const Eigen::MatrixXcd k_rep = op_rep(k);
  const bool k_is_identity =
      spectral_norm(k_rep - Eigen::MatrixXcd::Identity(k_rep.rows(), k_rep.cols())) <=
      tol * std::max(1.0, spectral_norm(k_rep));
  result.cls = k_is_identity ? FrameClass::operator_frame : FrameClass::k_frame;
  return result;
}

std::optional<DouglasFactor> douglas_factor(const ModuleOperator& k, const ModuleOperator& s,
                                            double tol) {
  const PositivityReport pos = op_positivity(s);
  if (!pos.positive)
    throw DomainError("douglas factorization requires a positive frame operator", pos.min_eig);
  const ModuleOperator root = op_sqrt(s);
  const ModuleOperator q = compose(op_pinv(root), k);
  const double residual = op_norm(compose(root, q) - k);
  if (residual > tol * std::max(1.0, op_norm(k))) return std::nullopt;
  return DouglasFactor{q, residual};
}

FrameReport compute_frame_report(const OperatorFamily& family, const ModuleOperator& k,
                                 std::optional<double> claimed_lower,
                                 std::optional<double> claimed_upper,
                                 const Tolerances& tol) {
  FrameReport report;
  report.bounds = optimal_bounds(family, k, tol.psd);
  report.bounds.lower_claimed = claimed_lower;
  report.bounds.upper_claimed = claimed_upper;
  report.cls = classify(family, k, tol.bound);

  const ModuleOperator s = frame_operator(family);
  if (auto factor = douglas_factor(k, s, tol.bound))
    report.douglas_residual = factor->residual;

  const Eigen::MatrixXcd m = op_rep(s);
  if (claimed_lower) {
    const Eigen::MatrixXcd n = rep_kkstar(k);
    report.margin_claimed_lower = hermitian_min_eig(m - *claimed_lower * n);
  }
  if (claimed_upper)
    report.margin_claimed_upper = hermitian_min_eig(
        *claimed_upper * Eigen::MatrixXcd::Identity(m.rows(), m.cols()) - m);
  return report;
}

}  // namespace mframes
