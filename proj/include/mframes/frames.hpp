#pragma once

#include <optional>
#include <string>

#include "mframes/measure.hpp"

namespace mframes {

struct Tolerances {
  double psd = 1e-9;      // relative PSD / positivity tolerance
  double bound = 1e-8;    // bound comparisons (predicted vs optimal)
  double commute = 1e-8;  // commutation hypotheses, relative to norm products
};

/// Optimal lower frame bound; degenerate cases are first-class values rather
/// than errors: `none` when range(KK*) escapes range(S) (no positive bound
/// exists), `unbounded` when K = 0 (every bound works vacuously).
struct LowerBound {
  enum class Kind { value, none, unbounded };
  Kind kind = Kind::none;
  double value = 0.0;

  static LowerBound of(double v) { return {Kind::value, v}; }
  static LowerBound none() { return {Kind::none, 0.0}; }
  static LowerBound unbounded() { return {Kind::unbounded, 0.0}; }
  bool is_value() const { return kind == Kind::value; }
};

struct FrameBounds {
  LowerBound lower_opt;
  double upper_opt = 0.0;
  std::optional<double> lower_claimed, upper_claimed;
  /// Min eigenvalue of rep(S - lower_opt*KK*) resp. rep(upper_opt*I - S);
  /// certifies the bounds as PSD inequalities.
  double margin_lower = 0.0;
  double margin_upper = 0.0;
};

enum class FrameClass {
  not_bessel,  // unreachable for finite discretizations, kept representable
  bessel_only,
  k_frame,
  tight_k_frame,
  parseval_k_frame,
  operator_frame,
};

std::string frame_class_name(FrameClass c);

struct Classification {
  FrameClass cls = FrameClass::bessel_only;
  double tight_constant = 0.0;  // set for tight/parseval
  bool degenerate_k = false;    // K = 0: lower bound vacuous
};

/// Quadrature value of the frame integral at x: sum_k w_k <T_k x, T_k x>.
AlgebraElement frame_integral(const OperatorFamily& family, const ModuleVector& x);

/// S = sum_k w_k T_k* ∘ T_k; self-adjoint and positive.
ModuleOperator frame_operator(const OperatorFamily& family);

/// Analysis operator R: x -> {T_k x}.
L2Vector analysis(const OperatorFamily& family, const ModuleVector& x);
/// Synthesis operator R*: {y_k} -> sum_k w_k T_k* y_k.
ModuleVector synthesis(const OperatorFamily& family, const L2Vector& yf);

/// Optimal K-frame bounds through the PSD pencil: upper = lambda_max(rep(S)),
/// lower = sup{a >= 0 : a KK* ⪯ S} = 1 / lambda_max(S^{+1/2} KK* S^{+1/2}).
FrameBounds optimal_bounds(const OperatorFamily& family, const ModuleOperator& k,
                           double tol = kPsdTol);

/// Independent bisection oracle for the optimal lower bound: PSD test of
/// rep(S) - a*rep(KK*) bisected over [0, upper guess]. Kept free of the
/// closed-form pencil path so the two routes can cross-check each other.
LowerBound optimal_lower_bisection(const OperatorFamily& family, const ModuleOperator& k,
                                   double tol = 1e-10);

/// Same pencil bounds restricted to a complex subspace of the coordinate
/// space (columns of `basis` orthonormal). Used for K-frames on range(T).
FrameBounds optimal_bounds_on_subspace(const OperatorFamily& family, const ModuleOperator& k,
                                       const Eigen::MatrixXcd& basis, double tol = kPsdTol);

Classification classify(const OperatorFamily& family, const ModuleOperator& k,
                        double tol = 1e-8);

struct DouglasFactor {
  ModuleOperator q;
  double residual = 0.0;
};

/// Solve K = S^{1/2} ∘ Q for the minimal-norm Q. Empty result signals the
/// range obstruction (equivalently lower_opt = none). Throws DomainError if S
/// is not positive.
std::optional<DouglasFactor> douglas_factor(const ModuleOperator& k, const ModuleOperator& s,
                                            double tol = 1e-8);

/// Everything a verification run reports about one (family, K) pair.
struct FrameReport {
  FrameBounds bounds;
  Classification cls;
  /// Residual of the Douglas factorization K = S^{1/2} Q; empty when the
  /// range obstruction blocks it.
  std::optional<double> douglas_residual;
  /// PSD margins of claimed bounds, when the scenario carries them.
  std::optional<double> margin_claimed_lower, margin_claimed_upper;
};

FrameReport compute_frame_report(const OperatorFamily& family, const ModuleOperator& k,
                                 std::optional<double> claimed_lower = {},
                                 std::optional<double> claimed_upper = {},
                                 const Tolerances& tol = {});

}  // namespace mframes
