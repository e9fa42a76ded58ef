#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "mframes/errors.hpp"

namespace mframes {

using Complex = std::complex<double>;

/// Relative tolerance used for positivity tests (tau * ||a||).
inline constexpr double kPsdTol = 1e-9;
/// Singular values below kRankTol * sigma_max count as zero.
inline constexpr double kRankTol = 1e-10;

/// Block structure of the coefficient C*-algebra A = M_{n_1} ⊕ ... ⊕ M_{n_K}.
struct AlgebraShape {
  std::vector<int> block_sizes;

  AlgebraShape() = default;
  explicit AlgebraShape(std::vector<int> sizes);

  int num_blocks() const { return static_cast<int>(block_sizes.size()); }
  /// Complex dimension of A as a vector space, sum of n_k^2.
  int dim() const;

  bool operator==(const AlgebraShape&) const = default;
};

/// An element of A: one complex n_k x n_k matrix per block.
class AlgebraElement {
 public:
  AlgebraElement() = default;
  AlgebraElement(AlgebraShape shape, std::vector<Eigen::MatrixXcd> blocks);

  static AlgebraElement zero(const AlgebraShape& shape);
  static AlgebraElement identity(const AlgebraShape& shape);
  /// c_k * I_{n_k} per block. With all block sizes 1 this is the D(c_1,...,c_K)
  /// diagonal element used throughout the tests.
  static AlgebraElement scalar_blocks(const AlgebraShape& shape,
                                      const std::vector<Complex>& scalars);

  const AlgebraShape& shape() const { return shape_; }
  int num_blocks() const { return shape_.num_blocks(); }
  const Eigen::MatrixXcd& block(int k) const { return blocks_[static_cast<size_t>(k)]; }
  Eigen::MatrixXcd& block(int k) { return blocks_[static_cast<size_t>(k)]; }

  AlgebraElement adjoint() const;
  AlgebraElement scaled(Complex c) const;
  bool all_finite() const;

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);

 private:
  AlgebraShape shape_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

struct PositivityReport {
  bool positive = false;
  double min_eig = 0.0;          // global minimum eigenvalue of the Hermitian part
  double hermitian_defect = 0.0; // ||a - a*|| in the C*-norm
};

/// C*-norm: max over blocks of the spectral norm.
double alg_norm(const AlgebraElement& a);

/// Positivity test with relative tolerance tol * ||a||. The Hermitian defect is
/// reported rather than silently symmetrized.
PositivityReport alg_positivity(const AlgebraElement& a, double tol = kPsdTol);

/// Order test a ⪯ b, delegated to alg_positivity(b - a).
bool alg_leq(const AlgebraElement& a, const AlgebraElement& b, double tol = kPsdTol);

/// |a| = (a*a)^{1/2}.
AlgebraElement alg_abs(const AlgebraElement& a);

/// Unique positive square root of a positive element. Throws DomainError
/// (carrying min_eig) if a is not positive within tol.
AlgebraElement alg_sqrt(const AlgebraElement& a, double tol = kPsdTol);

}  // namespace mframes
