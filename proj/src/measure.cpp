#include "mframes/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mframes {

MeasureDiscretization MeasureDiscretization::discrete(const std::vector<double>& weights) {
  MeasureDiscretization disc;
  disc.source = Source::discrete;
  disc.atoms.reserve(weights.size());
  for (size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] > 0.0))
      throw DomainError("discrete measure weights must be positive", weights[k]);
    disc.atoms.push_back({static_cast<double>(k), weights[k]});
  }
  if (disc.atoms.empty()) throw DomainError("measure needs at least one atom");
  return disc;
}

MeasureDiscretization MeasureDiscretization::discrete_with_nodes(std::vector<Atom> atoms) {
  MeasureDiscretization disc;
  disc.source = Source::discrete;
  disc.explicit_nodes = true;
  for (const auto& atom : atoms)
    if (!(atom.weight > 0.0))
      throw DomainError("discrete measure weights must be positive", atom.weight);
  if (atoms.empty()) throw DomainError("measure needs at least one atom");
  disc.atoms = std::move(atoms);
  return disc;
}

MeasureDiscretization MeasureDiscretization::interval(double a, double b, Rule rule, int n) {
  if (n < 1) throw DomainError("quadrature order must be >= 1", n);
  if (!(a < b)) throw DomainError("interval requires a < b");
  MeasureDiscretization disc;
  disc.source = Source::interval;
  disc.a = a;
  disc.b = b;
  disc.rule = rule;
  disc.n = n;
  disc.atoms.resize(static_cast<size_t>(n));
  if (rule == Rule::midpoint) {
    const double h = (b - a) / n;
    for (int k = 0; k < n; ++k) disc.atoms[static_cast<size_t>(k)] = {a + (k + 0.5) * h, h};
  } else {
    std::vector<double> nodes, weights;
    gauss_legendre(n, a, b, nodes, weights);
    for (int k = 0; k < n; ++k)
      disc.atoms[static_cast<size_t>(k)] = {nodes[static_cast<size_t>(k)],
                                            weights[static_cast<size_t>(k)]};
  }
  return disc;
}

double MeasureDiscretization::total_weight() const {
  double sum = 0.0;
  for (const auto& atom : atoms) sum += atom.weight;
  return sum;
}

bool MeasureDiscretization::aligned_with(const MeasureDiscretization& other) const {
  if (atoms.size() != other.atoms.size()) return false;
  for (size_t k = 0; k < atoms.size(); ++k)
    if (atoms[k].node != other.atoms[k].node || atoms[k].weight != other.atoms[k].weight)
      return false;
  return true;
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw DomainError("quadrature order must be >= 1", n);
  nodes.assign(static_cast<size_t>(n), 0.0);
  weights.assign(static_cast<size_t>(n), 0.0);
  const double eps = 1e-15;
  const int half = (n + 1) / 2;
  const double mid = 0.5 * (b + a);
  const double len = 0.5 * (b - a);
  for (int i = 0; i < half; ++i) {
    // Chebyshev estimate, then Newton on P_n.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= eps) break;
    }
    nodes[static_cast<size_t>(i)] = mid - len * z;
    nodes[static_cast<size_t>(n - 1 - i)] = mid + len * z;
    weights[static_cast<size_t>(i)] = 2.0 * len / ((1.0 - z * z) * pp * pp);
    weights[static_cast<size_t>(n - 1 - i)] = weights[static_cast<size_t>(i)];
  }
}

OperatorFamily::OperatorFamily(MeasureDiscretization disc, std::vector<ModuleOperator> ops)
    : disc_(std::move(disc)), ops_(std::move(ops)) {
  if (ops_.empty() || static_cast<int>(ops_.size()) != disc_.size())
    throw StructuralError("operator count must match atom count");
  for (const auto& op : ops_)
    if (!(op.shape() == ops_.front().shape()) || op.rank() != ops_.front().rank())
      throw StructuralError("family operators must share shape and rank");
}

OperatorFamily family_from_generator(std::vector<ModuleOperator> coeffs,
                                     const MeasureDiscretization& disc) {
  if (coeffs.empty()) throw StructuralError("generator needs at least one coefficient");
  for (const auto& c : coeffs)
    if (!(c.shape() == coeffs.front().shape()) || c.rank() != coeffs.front().rank())
      throw StructuralError("generator coefficients must share shape and rank");
  if (disc.source == MeasureDiscretization::Source::discrete && !disc.explicit_nodes)
    throw StructuralError("generator evaluation requires node values");
  std::vector<ModuleOperator> ops;
  ops.reserve(static_cast<size_t>(disc.size()));
  for (const auto& atom : disc.atoms) {
    ModuleOperator acc = ModuleOperator::zero(coeffs.front().shape(), coeffs.front().rank());
    double power = 1.0;
    for (const auto& c : coeffs) {
      acc = acc + c.scaled(power);
      power *= atom.node;
    }
    ops.push_back(std::move(acc));
  }
  OperatorFamily family(disc, std::move(ops));
  family.generator_ = std::move(coeffs);
  return family;
}

L2Vector::L2Vector(MeasureDiscretization disc, std::vector<ModuleVector> entries)
    : disc_(std::move(disc)), entries_(std::move(entries)) {
  if (entries_.empty() || static_cast<int>(entries_.size()) != disc_.size())
    throw StructuralError("entry count must match atom count");
  for (const auto& e : entries_)
    if (!(e.shape() == entries_.front().shape()) || e.rank() != entries_.front().rank())
      throw StructuralError("l2 entries must share shape and rank");
}

AlgebraElement l2_inner(const L2Vector& xf, const L2Vector& yf) {
  if (!xf.disc().aligned_with(yf.disc()))
    throw StructuralError("l2 vectors live on different discretizations");
  AlgebraElement acc = AlgebraElement::zero(xf.entry(0).shape());
  for (int k = 0; k < xf.size(); ++k)
    acc = acc + mod_inner(xf.entry(k), yf.entry(k)).scaled(xf.disc().atoms[static_cast<size_t>(k)].weight);
  return acc;
}

double l2_norm(const L2Vector& xf) { return std::sqrt(alg_norm(l2_inner(xf, xf))); }

bool ScalarFamily::positively_confined(double* inf_out, double* sup_out) const {
  if (values.empty()) return false;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const Complex& v : values) {
    if (v.imag() != 0.0 || !(v.real() > 0.0)) return false;
    lo = std::min(lo, v.real());
    hi = std::max(hi, v.real());
  }
  if (inf_out) *inf_out = lo;
  if (sup_out) *sup_out = hi;
  return lo > 0.0 && std::isfinite(hi);
}

double ScalarFamily::weighted_abs2(const MeasureDiscretization& disc) const {
  if (disc.size() != size())
    throw StructuralError("scalar family is not aligned with the discretization");
  double sum = 0.0;
  for (int k = 0; k < size(); ++k)
    sum += disc.atoms[static_cast<size_t>(k)].weight * std::norm(values[static_cast<size_t>(k)]);
  return sum;
}

}  // namespace mframes
