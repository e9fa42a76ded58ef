#include "mframes/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mframes {

AlgebraShape::AlgebraShape(std::vector<int> sizes) : block_sizes(std::move(sizes)) {
  if (block_sizes.empty()) throw StructuralError("algebra shape must have at least one block");
  for (int n : block_sizes)
    if (n < 1) throw StructuralError("algebra block sizes must be >= 1");
}

int AlgebraShape::dim() const {
  int d = 0;
  for (int n : block_sizes) d += n * n;
  return d;
}

AlgebraElement::AlgebraElement(AlgebraShape shape, std::vector<Eigen::MatrixXcd> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
  if (blocks_.size() != static_cast<size_t>(shape_.num_blocks()))
    throw StructuralError("block count does not match algebra shape");
  for (int k = 0; k < shape_.num_blocks(); ++k) {
    const int n = shape_.block_sizes[static_cast<size_t>(k)];
    if (blocks_[static_cast<size_t>(k)].rows() != n || blocks_[static_cast<size_t>(k)].cols() != n)
      throw StructuralError("block dimensions do not match algebra shape");
  }
}

AlgebraElement AlgebraElement::zero(const AlgebraShape& shape) {
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(static_cast<size_t>(shape.num_blocks()));
  for (int n : shape.block_sizes) blocks.push_back(Eigen::MatrixXcd::Zero(n, n));
  return AlgebraElement(shape, std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const AlgebraShape& shape) {
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(static_cast<size_t>(shape.num_blocks()));
  for (int n : shape.block_sizes) blocks.push_back(Eigen::MatrixXcd::Identity(n, n));
  return AlgebraElement(shape, std::move(blocks));
}

AlgebraElement AlgebraElement::scalar_blocks(const AlgebraShape& shape,
                                             const std::vector<Complex>& scalars) {
  if (scalars.size() != static_cast<size_t>(shape.num_blocks()))
    throw StructuralError("scalar count does not match algebra shape");
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(scalars.size());
  for (int k = 0; k < shape.num_blocks(); ++k) {
    const int n = shape.block_sizes[static_cast<size_t>(k)];
    blocks.push_back(scalars[static_cast<size_t>(k)] * Eigen::MatrixXcd::Identity(n, n));
  }
  return AlgebraElement(shape, std::move(blocks));
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return AlgebraElement(shape_, std::move(blocks));
}

AlgebraElement AlgebraElement::scaled(Complex c) const {
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(c * b);
  return AlgebraElement(shape_, std::move(blocks));
}

bool AlgebraElement::all_finite() const {
  for (const auto& b : blocks_)
    if (!b.allFinite()) return false;
  return true;
}

namespace {

void require_same_shape(const AlgebraElement& a, const AlgebraElement& b) {
  if (!(a.shape() == b.shape())) throw StructuralError("algebra shapes differ");
}

}  // namespace

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_shape(a, b);
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(a.blocks_.size());
  for (size_t k = 0; k < a.blocks_.size(); ++k) blocks.push_back(a.blocks_[k] + b.blocks_[k]);
  return AlgebraElement(a.shape_, std::move(blocks));
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_shape(a, b);
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(a.blocks_.size());
  for (size_t k = 0; k < a.blocks_.size(); ++k) blocks.push_back(a.blocks_[k] - b.blocks_[k]);
  return AlgebraElement(a.shape_, std::move(blocks));
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_shape(a, b);
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(a.blocks_.size());
  for (size_t k = 0; k < a.blocks_.size(); ++k) blocks.push_back(a.blocks_[k] * b.blocks_[k]);
  return AlgebraElement(a.shape_, std::move(blocks));
}

double alg_norm(const AlgebraElement& a) {
  double norm = 0.0;
  for (int k = 0; k < a.num_blocks(); ++k) {
    const auto& b = a.block(k);
    if (b.rows() == 1) {
      norm = std::max(norm, std::abs(b(0, 0)));
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b);
      norm = std::max(norm, svd.singularValues()(0));
    }
  }
  return norm;
}

PositivityReport alg_positivity(const AlgebraElement& a, double tol) {
  if (!a.all_finite()) throw NumericError("algebra element has non-finite entries");
  PositivityReport report;
  report.hermitian_defect = alg_norm(a - a.adjoint());
  double min_eig = std::numeric_limits<double>::infinity();
  for (int k = 0; k < a.num_blocks(); ++k) {
    const Eigen::MatrixXcd herm = 0.5 * (a.block(k) + a.block(k).adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm, Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
  }
  report.min_eig = min_eig;
  const double scale = alg_norm(a);
  report.positive = report.hermitian_defect <= tol * scale && min_eig >= -tol * scale;
  return report;
}

bool alg_leq(const AlgebraElement& a, const AlgebraElement& b, double tol) {
  return alg_positivity(b - a, tol).positive;
}

namespace {

// Positive square root of the Hermitian part, eigenvalues clamped at zero.
AlgebraElement hermitian_sqrt(const AlgebraElement& a) {
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(static_cast<size_t>(a.num_blocks()));
  for (int k = 0; k < a.num_blocks(); ++k) {
    const Eigen::MatrixXcd herm = 0.5 * (a.block(k) + a.block(k).adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm);
    Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    blocks.push_back(eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().adjoint());
  }
  return AlgebraElement(a.shape(), std::move(blocks));
}

}  // namespace

AlgebraElement alg_abs(const AlgebraElement& a) {
  return hermitian_sqrt(a.adjoint() * a);
}

AlgebraElement alg_sqrt(const AlgebraElement& a, double tol) {
  const PositivityReport report = alg_positivity(a, tol);
  if (!report.positive)
    throw DomainError("sqrt requires a positive element", report.min_eig);
  return hermitian_sqrt(a);
}

}  // namespace mframes
