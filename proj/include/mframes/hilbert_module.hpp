#pragma once

#include <optional>
#include <vector>

#include "mframes/algebra.hpp"

namespace mframes {

/// Element of the Hilbert A-module H = A^m.
class ModuleVector {
 public:
  ModuleVector() = default;
  ModuleVector(AlgebraShape shape, std::vector<AlgebraElement> coords);

  static ModuleVector zero(const AlgebraShape& shape, int rank);

  const AlgebraShape& shape() const { return shape_; }
  int rank() const { return static_cast<int>(coords_.size()); }
  const AlgebraElement& coord(int i) const { return coords_[static_cast<size_t>(i)]; }
  const std::vector<AlgebraElement>& coords() const { return coords_; }

  ModuleVector scaled(Complex c) const;
  friend ModuleVector operator+(const ModuleVector& x, const ModuleVector& y);
  friend ModuleVector operator-(const ModuleVector& x, const ModuleVector& y);

 private:
  AlgebraShape shape_;
  std::vector<AlgebraElement> coords_;
};

/// A-valued inner product <x,y> = sum_i x_i (y_i)*. Left A-linear in x.
AlgebraElement mod_inner(const ModuleVector& x, const ModuleVector& y);
/// ||x|| = ||<x,x>||^{1/2}.
double mod_norm(const ModuleVector& x);

/// Adjointable operator on H = A^m, stored as an m x m array of cells c_{ij}
/// acting by right multiplication: (Tx)_j = sum_i x_i c_{ij}. This makes every
/// A-linear map of A^m expressible; End_A*(A^m) is M_m(A) with reversed
/// multiplication.
class ModuleOperator {
 public:
  ModuleOperator() = default;
  ModuleOperator(AlgebraShape shape, int rank, std::vector<AlgebraElement> cells);

  static ModuleOperator zero(const AlgebraShape& shape, int rank);
  static ModuleOperator identity(const AlgebraShape& shape, int rank);
  /// Rank-1 right-multiplication operator x -> x c on H = A^1.
  static ModuleOperator right_mult(const AlgebraElement& c);

  const AlgebraShape& shape() const { return shape_; }
  int rank() const { return rank_; }
  const AlgebraElement& cell(int i, int j) const {
    return cells_[static_cast<size_t>(i * rank_ + j)];
  }

  ModuleVector apply(const ModuleVector& x) const;
  ModuleOperator adjoint() const;  // (T*)_{ij} = (c_{ji})*
  ModuleOperator scaled(Complex c) const;

  friend ModuleOperator operator+(const ModuleOperator& t, const ModuleOperator& u);
  friend ModuleOperator operator-(const ModuleOperator& t, const ModuleOperator& u);

 private:
  AlgebraShape shape_;
  int rank_ = 0;
  std::vector<AlgebraElement> cells_;  // row-major m x m
};

/// Composition t ∘ u (u applied first); cell matrix is cells(u) * cells(t)
/// under the right-multiplication convention.
ModuleOperator compose(const ModuleOperator& t, const ModuleOperator& u);

/// Faithful complex representation of H on C^D, D = m * sum n_k^2, in the
/// orthonormal coordinate basis indexed by (coordinate, block, entry). It is
/// multiplicative and adjoint-compatible (rep(T*) = rep(T)^H), so spectra,
/// norms and positivity transfer verbatim (spectral permanence).
Eigen::VectorXcd vec(const ModuleVector& x);
ModuleVector unvec(const AlgebraShape& shape, int rank, const Eigen::VectorXcd& v);
Eigen::MatrixXcd op_rep(const ModuleOperator& t);

/// Pull a representation matrix back to cell form. Throws RepresentationError
/// if the matrix is not (within tol, relative) in the right-multiplication
/// algebra's image.
ModuleOperator op_from_rep(const AlgebraShape& shape, int rank, const Eigen::MatrixXcd& m,
                           double tol = 1e-8);

double op_norm(const ModuleOperator& t);
PositivityReport op_positivity(const ModuleOperator& t, double tol = kPsdTol);
ModuleOperator op_sqrt(const ModuleOperator& t, double tol = kPsdTol);
ModuleOperator op_pinv(const ModuleOperator& t, double rank_tol = kRankTol);
/// Throws RankError (carrying sigma_min) on singular input.
ModuleOperator op_inverse(const ModuleOperator& t, double rank_tol = kRankTol);
int op_rank(const ModuleOperator& t, double rank_tol = kRankTol);
bool op_is_surjective(const ModuleOperator& t, double rank_tol = kRankTol);
bool op_is_injective(const ModuleOperator& t, double rank_tol = kRankTol);

struct OrderReport {
  bool leq = false;
  double margin = 0.0;  // min eigenvalue of the Hermitian part of rep(u - t)
};

/// C*-order test t ⪯ u through the complex representation.
OrderReport op_order(const ModuleOperator& t, const ModuleOperator& u, double tol = kPsdTol);

struct RangeInclusionReport {
  bool included = false;
  /// Smallest lambda >= 0 with TT* ⪯ lambda KK*; empty when not included.
  std::optional<double> lambda_min;
};

/// Douglas range inclusion: range(T) ⊆ range(K), with the optimal majorization
/// constant lambda_min = lambda_max(N^{+1/2} M N^{+1/2}), M = rep(TT*),
/// N = rep(KK*).
RangeInclusionReport op_range_inclusion(const ModuleOperator& t, const ModuleOperator& k,
                                        double tol = kPsdTol);

// Hermitian-matrix helpers shared by the frame-bound machinery.
double hermitian_min_eig(const Eigen::MatrixXcd& m);
double hermitian_max_eig(const Eigen::MatrixXcd& m);
/// Pseudo-inverse square root of a Hermitian PSD matrix.
Eigen::MatrixXcd psd_pinv_sqrt(const Eigen::MatrixXcd& m, double rank_tol = kRankTol);
/// Orthogonal projection onto the range of a Hermitian PSD matrix.
Eigen::MatrixXcd psd_range_projection(const Eigen::MatrixXcd& m, double rank_tol = kRankTol);

}  // namespace mframes
