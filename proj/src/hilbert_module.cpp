#include "mframes/hilbert_module.hpp"

#include <algorithm>
#include <cmath>

namespace mframes {

ModuleVector::ModuleVector(AlgebraShape shape, std::vector<AlgebraElement> coords)
    : shape_(std::move(shape)), coords_(std::move(coords)) {
  if (coords_.empty()) throw StructuralError("module vector needs at least one coordinate");
  for (const auto& c : coords_)
    if (!(c.shape() == shape_)) throw StructuralError("coordinate shape mismatch");
}

ModuleVector ModuleVector::zero(const AlgebraShape& shape, int rank) {
  return ModuleVector(shape,
                      std::vector<AlgebraElement>(static_cast<size_t>(rank),
                                                  AlgebraElement::zero(shape)));
}

ModuleVector ModuleVector::scaled(Complex c) const {
  std::vector<AlgebraElement> coords;
  coords.reserve(coords_.size());
  for (const auto& x : coords_) coords.push_back(x.scaled(c));
  return ModuleVector(shape_, std::move(coords));
}

namespace {

void require_aligned(const ModuleVector& x, const ModuleVector& y) {
  if (!(x.shape() == y.shape()) || x.rank() != y.rank())
    throw StructuralError("module vectors have mismatched shape or rank");
}

void require_aligned(const ModuleOperator& t, const ModuleOperator& u) {
  if (!(t.shape() == u.shape()) || t.rank() != u.rank())
    throw StructuralError("module operators have mismatched shape or rank");
}

}  // namespace

ModuleVector operator+(const ModuleVector& x, const ModuleVector& y) {
  require_aligned(x, y);
  std::vector<AlgebraElement> coords;
  coords.reserve(x.coords_.size());
  for (size_t i = 0; i < x.coords_.size(); ++i) coords.push_back(x.coords_[i] + y.coords_[i]);
  return ModuleVector(x.shape_, std::move(coords));
}

ModuleVector operator-(const ModuleVector& x, const ModuleVector& y) {
  require_aligned(x, y);
  std::vector<AlgebraElement> coords;
  coords.reserve(x.coords_.size());
  for (size_t i = 0; i < x.coords_.size(); ++i) coords.push_back(x.coords_[i] - y.coords_[i]);
  return ModuleVector(x.shape_, std::move(coords));
}

AlgebraElement mod_inner(const ModuleVector& x, const ModuleVector& y) {
  require_aligned(x, y);
  AlgebraElement acc = AlgebraElement::zero(x.shape());
  for (int i = 0; i < x.rank(); ++i) acc = acc + x.coord(i) * y.coord(i).adjoint();
  return acc;
}

double mod_norm(const ModuleVector& x) { return std::sqrt(alg_norm(mod_inner(x, x))); }

ModuleOperator::ModuleOperator(AlgebraShape shape, int rank, std::vector<AlgebraElement> cells)
    : shape_(std::move(shape)), rank_(rank), cells_(std::move(cells)) {
  if (rank_ < 1) throw StructuralError("operator rank must be >= 1");
  if (cells_.size() != static_cast<size_t>(rank_) * static_cast<size_t>(rank_))
    throw StructuralError("cell array must be rank x rank");
  for (const auto& c : cells_)
    if (!(c.shape() == shape_)) throw StructuralError("cell shape mismatch");
}

ModuleOperator ModuleOperator::zero(const AlgebraShape& shape, int rank) {
  return ModuleOperator(shape, rank,
                        std::vector<AlgebraElement>(
                            static_cast<size_t>(rank) * static_cast<size_t>(rank),
                            AlgebraElement::zero(shape)));
}

ModuleOperator ModuleOperator::identity(const AlgebraShape& shape, int rank) {
  auto op = ModuleOperator::zero(shape, rank);
  for (int i = 0; i < rank; ++i)
    op.cells_[static_cast<size_t>(i * rank + i)] = AlgebraElement::identity(shape);
  return op;
}

ModuleOperator ModuleOperator::right_mult(const AlgebraElement& c) {
  return ModuleOperator(c.shape(), 1, {c});
}

ModuleVector ModuleOperator::apply(const ModuleVector& x) const {
  if (!(x.shape() == shape_) || x.rank() != rank_)
    throw StructuralError("operator/vector shape or rank mismatch");
  std::vector<AlgebraElement> coords;
  coords.reserve(static_cast<size_t>(rank_));
  for (int j = 0; j < rank_; ++j) {
    AlgebraElement acc = AlgebraElement::zero(shape_);
    for (int i = 0; i < rank_; ++i) acc = acc + x.coord(i) * cell(i, j);
    coords.push_back(std::move(acc));
  }
  return ModuleVector(shape_, std::move(coords));
}

ModuleOperator ModuleOperator::adjoint() const {
  std::vector<AlgebraElement> cells;
  cells.reserve(cells_.size());
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j) cells.push_back(cell(j, i).adjoint());
  return ModuleOperator(shape_, rank_, std::move(cells));
}

ModuleOperator ModuleOperator::scaled(Complex c) const {
  std::vector<AlgebraElement> cells;
  cells.reserve(cells_.size());
  for (const auto& x : cells_) cells.push_back(x.scaled(c));
  return ModuleOperator(shape_, rank_, std::move(cells));
}

ModuleOperator operator+(const ModuleOperator& t, const ModuleOperator& u) {
  require_aligned(t, u);
  std::vector<AlgebraElement> cells;
  cells.reserve(t.cells_.size());
  for (size_t i = 0; i < t.cells_.size(); ++i) cells.push_back(t.cells_[i] + u.cells_[i]);
  return ModuleOperator(t.shape_, t.rank_, std::move(cells));
}

ModuleOperator operator-(const ModuleOperator& t, const ModuleOperator& u) {
  require_aligned(t, u);
  std::vector<AlgebraElement> cells;
  cells.reserve(t.cells_.size());
  for (size_t i = 0; i < t.cells_.size(); ++i) cells.push_back(t.cells_[i] - u.cells_[i]);
  return ModuleOperator(t.shape_, t.rank_, std::move(cells));
}

ModuleOperator compose(const ModuleOperator& t, const ModuleOperator& u) {
  require_aligned(t, u);
  const int m = t.rank();
  std::vector<AlgebraElement> cells;
  cells.reserve(static_cast<size_t>(m) * static_cast<size_t>(m));
  // cells(t ∘ u) = cells(u) * cells(t): x -> (x cells(u)) cells(t)
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      AlgebraElement acc = AlgebraElement::zero(t.shape());
      for (int l = 0; l < m; ++l) acc = acc + u.cell(i, l) * t.cell(l, j);
      cells.push_back(std::move(acc));
    }
  return ModuleOperator(t.shape(), m, std::move(cells));
}

namespace {

// Coordinate offsets: index (i, k, p, q) -> i * dim(A) + prefix(k) + p*n_k + q.
std::vector<int> block_offsets(const AlgebraShape& shape) {
  std::vector<int> offs(static_cast<size_t>(shape.num_blocks()) + 1, 0);
  for (int k = 0; k < shape.num_blocks(); ++k) {
    const int n = shape.block_sizes[static_cast<size_t>(k)];
    offs[static_cast<size_t>(k) + 1] = offs[static_cast<size_t>(k)] + n * n;
  }
  return offs;
}

}  // namespace

Eigen::VectorXcd vec(const ModuleVector& x) {
  const int adim = x.shape().dim();
  const auto offs = block_offsets(x.shape());
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(x.rank()) * adim);
  for (int i = 0; i < x.rank(); ++i)
    for (int k = 0; k < x.shape().num_blocks(); ++k) {
      const int n = x.shape().block_sizes[static_cast<size_t>(k)];
      const auto& b = x.coord(i).block(k);
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) v(i * adim + offs[static_cast<size_t>(k)] + p * n + q) = b(p, q);
    }
  return v;
}

ModuleVector unvec(const AlgebraShape& shape, int rank, const Eigen::VectorXcd& v) {
  const int adim = shape.dim();
  if (v.size() != static_cast<Eigen::Index>(rank) * adim)
    throw StructuralError("vector length does not match shape and rank");
  const auto offs = block_offsets(shape);
  std::vector<AlgebraElement> coords;
  coords.reserve(static_cast<size_t>(rank));
  for (int i = 0; i < rank; ++i) {
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(static_cast<size_t>(shape.num_blocks()));
    for (int k = 0; k < shape.num_blocks(); ++k) {
      const int n = shape.block_sizes[static_cast<size_t>(k)];
      Eigen::MatrixXcd b(n, n);
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) b(p, q) = v(i * adim + offs[static_cast<size_t>(k)] + p * n + q);
      blocks.push_back(std::move(b));
    }
    coords.emplace_back(shape, std::move(blocks));
  }
  return ModuleVector(shape, std::move(coords));
}

Eigen::MatrixXcd op_rep(const ModuleOperator& t) {
  const AlgebraShape& shape = t.shape();
  const int m = t.rank();
  const int adim = shape.dim();
  const auto offs = block_offsets(shape);
  const Eigen::Index dim = static_cast<Eigen::Index>(m) * adim;
  Eigen::MatrixXcd rep = Eigen::MatrixXcd::Zero(dim, dim);
  // (Tx)_{j,k}(p,q) = sum_i sum_r x_{i,k}(p,r) c_{ij,k}(r,q)
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < shape.num_blocks(); ++k) {
        const int n = shape.block_sizes[static_cast<size_t>(k)];
        const auto& c = t.cell(i, j).block(k);
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
              rep(j * adim + offs[static_cast<size_t>(k)] + p * n + q,
                  i * adim + offs[static_cast<size_t>(k)] + p * n + r) += c(r, q);
      }
  return rep;
}

ModuleOperator op_from_rep(const AlgebraShape& shape, int rank, const Eigen::MatrixXcd& m,
                           double tol) {
  const int adim = shape.dim();
  if (m.rows() != static_cast<Eigen::Index>(rank) * adim || m.rows() != m.cols())
    throw StructuralError("representation dimension does not match shape and rank");
  // Cells are read off by applying the matrix to e_i ⊗ 1_A.
  std::vector<AlgebraElement> cells(
      static_cast<size_t>(rank) * static_cast<size_t>(rank), AlgebraElement::zero(shape));
  for (int i = 0; i < rank; ++i) {
    std::vector<AlgebraElement> coords(static_cast<size_t>(rank), AlgebraElement::zero(shape));
    coords[static_cast<size_t>(i)] = AlgebraElement::identity(shape);
    const Eigen::VectorXcd image = m * vec(ModuleVector(shape, std::move(coords)));
    const ModuleVector row = unvec(shape, rank, image);
    for (int j = 0; j < rank; ++j)
      cells[static_cast<size_t>(i * rank + j)] = row.coord(j);
  }
  ModuleOperator pulled(shape, rank, std::move(cells));
  const double scale = std::max(1.0, m.norm());
  if ((op_rep(pulled) - m).norm() > tol * scale)
    throw RepresentationError("matrix is not in the right-multiplication algebra");
  return pulled;
}

double op_norm(const ModuleOperator& t) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op_rep(t));
  return svd.singularValues()(0);
}

double hermitian_min_eig(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (m + m.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double hermitian_max_eig(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (m + m.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

Eigen::MatrixXcd psd_pinv_sqrt(const Eigen::MatrixXcd& m, double rank_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (m + m.adjoint()));
  const Eigen::VectorXd vals = eig.eigenvalues();
  const double cutoff = rank_tol * std::max(vals.cwiseAbs().maxCoeff(), 0.0);
  Eigen::VectorXd inv_sqrt = Eigen::VectorXd::Zero(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) > cutoff) inv_sqrt(i) = 1.0 / std::sqrt(vals(i));
  return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().adjoint();
}

Eigen::MatrixXcd psd_range_projection(const Eigen::MatrixXcd& m, double rank_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (m + m.adjoint()));
  const Eigen::VectorXd vals = eig.eigenvalues();
  const double cutoff = rank_tol * std::max(vals.cwiseAbs().maxCoeff(), 0.0);
  Eigen::VectorXd mask = Eigen::VectorXd::Zero(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) > cutoff) mask(i) = 1.0;
  return eig.eigenvectors() * mask.asDiagonal() * eig.eigenvectors().adjoint();
}

PositivityReport op_positivity(const ModuleOperator& t, double tol) {
  const Eigen::MatrixXcd rep = op_rep(t);
  PositivityReport report;
  report.hermitian_defect = (rep - rep.adjoint()).norm() == 0.0
                                ? 0.0
                                : Eigen::JacobiSVD<Eigen::MatrixXcd>(rep - rep.adjoint())
                                      .singularValues()(0);
  report.min_eig = hermitian_min_eig(rep);
  const double scale = rep.isZero(0.0) ? 0.0 : Eigen::JacobiSVD<Eigen::MatrixXcd>(rep)
                                                   .singularValues()(0);
  report.positive =
      report.hermitian_defect <= tol * scale && report.min_eig >= -tol * scale;
  return report;
}

ModuleOperator op_sqrt(const ModuleOperator& t, double tol) {
  const PositivityReport report = op_positivity(t, tol);
  if (!report.positive)
    throw DomainError("operator sqrt requires a positive operator", report.min_eig);
  const Eigen::MatrixXcd rep = op_rep(t);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (rep + rep.adjoint()));
  const Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXcd root =
      eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().adjoint();
  return op_from_rep(t.shape(), t.rank(), root);
}

ModuleOperator op_pinv(const ModuleOperator& t, double rank_tol) {
  const Eigen::MatrixXcd rep = op_rep(t);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rep, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sing = svd.singularValues();
  const double cutoff = sing.size() > 0 ? rank_tol * sing(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sing.size());
  for (Eigen::Index i = 0; i < sing.size(); ++i)
    if (sing(i) > cutoff) inv(i) = 1.0 / sing(i);
  const Eigen::MatrixXcd pinv =
      svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
  return op_from_rep(t.shape(), t.rank(), pinv);
}

namespace {

Eigen::VectorXd op_singular_values(const ModuleOperator& t) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op_rep(t));
  return svd.singularValues();
}

}  // namespace

ModuleOperator op_inverse(const ModuleOperator& t, double rank_tol) {
  const Eigen::MatrixXcd rep = op_rep(t);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rep, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sing = svd.singularValues();
  const double sigma_min = sing(sing.size() - 1);
  if (sing(0) == 0.0 || sigma_min <= rank_tol * sing(0))
    throw RankError("operator is singular", sigma_min);
  const Eigen::MatrixXcd inv =
      svd.matrixV() * sing.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  return op_from_rep(t.shape(), t.rank(), inv);
}

int op_rank(const ModuleOperator& t, double rank_tol) {
  const Eigen::VectorXd sing = op_singular_values(t);
  if (sing.size() == 0 || sing(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sing.size(); ++i)
    if (sing(i) > rank_tol * sing(0)) ++rank;
  return rank;
}

bool op_is_surjective(const ModuleOperator& t, double rank_tol) {
  return op_rank(t, rank_tol) == t.rank() * t.shape().dim();
}

bool op_is_injective(const ModuleOperator& t, double rank_tol) {
  return op_rank(t, rank_tol) == t.rank() * t.shape().dim();
}

OrderReport op_order(const ModuleOperator& t, const ModuleOperator& u, double tol) {
  require_aligned(t, u);
  const Eigen::MatrixXcd diff = op_rep(u) - op_rep(t);
  OrderReport report;
  report.margin = hermitian_min_eig(diff);
  const double defect = Eigen::JacobiSVD<Eigen::MatrixXcd>(diff - diff.adjoint())
                            .singularValues()(0);
  const double scale = Eigen::JacobiSVD<Eigen::MatrixXcd>(diff).singularValues()(0);
  report.leq = defect <= tol * scale && report.margin >= -tol * scale;
  return report;
}

RangeInclusionReport op_range_inclusion(const ModuleOperator& t, const ModuleOperator& k,
                                        double tol) {
  require_aligned(t, k);
  const Eigen::MatrixXcd tr = op_rep(t);
  const Eigen::MatrixXcd kr = op_rep(k);
  const Eigen::MatrixXcd m = tr * tr.adjoint();  // rep(TT*)
  const Eigen::MatrixXcd n = kr * kr.adjoint();  // rep(KK*)

  RangeInclusionReport report;
  const double t_norm = tr.isZero(0.0) ? 0.0 : Eigen::JacobiSVD<Eigen::MatrixXcd>(tr)
                                                   .singularValues()(0);
  if (t_norm == 0.0) {  // zero operator: range {0} is contained in anything
    report.included = true;
    report.lambda_min = 0.0;
    return report;
  }
  const Eigen::MatrixXcd proj = psd_range_projection(n);
  const Eigen::MatrixXcd leak = tr - proj * tr;
  const double leak_norm = Eigen::JacobiSVD<Eigen::MatrixXcd>(leak).singularValues()(0);
  if (leak_norm > tol * t_norm) {
    report.included = false;
    return report;
  }
  report.included = true;
  const Eigen::MatrixXcd n_pinv_sqrt = psd_pinv_sqrt(n);
  report.lambda_min = std::max(0.0, hermitian_max_eig(n_pinv_sqrt * m * n_pinv_sqrt));
  return report;
}

}  // namespace mframes
