#pragma once

#include <string>
#include <vector>

#include "mframes/frames.hpp"
#include "mframes/rng.hpp"

namespace mframes {

struct HypothesisCheck {
  std::string name;
  bool ok = false;
  double margin = 0.0;
};

/// Executable form of one theorem instance: hypothesis margins, the theorem's
/// predicted bounds, the computed optimal bounds, and whether the prediction
/// is valid (predicted lower <= optimal lower and optimal upper <= predicted
/// upper, within tolerance). hypotheses_ok && !valid is a release-blocking
/// finding: it would contradict the proof.
struct TheoremVerdict {
  std::string theorem;
  std::vector<HypothesisCheck> hypotheses;
  bool hypotheses_ok = false;
  FrameBounds predicted;
  FrameBounds optimal;
  bool valid = false;
  bool vacuous = false;  // degenerate instance; validity holds vacuously
  /// Individual conclusion checks with margins (e.g. the four inequalities of
  /// the invertible-rescale chain, or sampled lower-bound checks).
  std::vector<HypothesisCheck> checks;
  std::optional<ModuleVector> witness;
  std::vector<std::string> notes;
};

/// predicted lower <= optimal lower + tol, across the degenerate kinds.
bool lower_bound_attained(const LowerBound& predicted, const LowerBound& optimal, double tol);

struct ComposeRightResult {
  OperatorFamily family;   // {T_omega ∘ Q}
  ModuleOperator new_k;    // Q* ∘ K
  TheoremVerdict verdict;
};

/// Right composition: a K-frame composed with Q is a (Q*K)-frame with bounds
/// (A, B ||Q||^2).
ComposeRightResult compose_right(const OperatorFamily& family, const ModuleOperator& k,
                                 const ModuleOperator& q, const Tolerances& tol = {});

/// Invertible rescale: for invertible Q commuting with K*, the best bounds
/// C, D of {T_omega Q} as a K-frame sit in the chain
/// A ||Q^{-1}||^{-2} <= C <= A ||Q||^2 and B ||Q^{-1}||^{-2} <= D <= B ||Q||^2.
/// Throws RankError when Q is singular; commutation failure is a hypothesis
/// failure, not an error.
TheoremVerdict invertible_rescale_check(const OperatorFamily& family, const ModuleOperator& k,
                                        const ModuleOperator& q, const Tolerances& tol = {});

/// Tight-frame inverse relation: a tight K-frame (constant A1) is a tight
/// operator frame (constant A2) iff K_r^{-1} = (A1/A2) K*, equivalently
/// KK* = (A2/A1) I. Both directions are checked independently.
TheoremVerdict tight_relation(const OperatorFamily& family, const ModuleOperator& k,
                              const Tolerances& tol = {});

/// Range-inclusion transfer: range(T) ⊆ range(K) with TT* ⪯ lambda KK* makes
/// every K-frame a T-frame with predicted bounds (A/lambda, B).
TheoremVerdict k_transfer(const OperatorFamily& family, const ModuleOperator& k,
                          const ModuleOperator& t, const Tolerances& tol = {});

struct LeftComposeResult {
  OperatorFamily family;  // {T ∘ T_omega}
  TheoremVerdict restriction;   // K-frame for range(T), bounds (A||T^dag||^{-2}, B||T||^2)
  TheoremVerdict surjectivity;  // K-frame on all of H + dense-range K => T surjective
};

LeftComposeResult left_compose(const OperatorFamily& family, const ModuleOperator& t,
                               const ModuleOperator& k, const Tolerances& tol = {},
                               int lower_samples = 100, uint64_t sample_seed = 0x6d66726d73ULL);

struct PerturbScalarResult {
  OperatorFamily family;  // {T_omega + a_omega L K*}
  double r_const = 0.0;   // R = ||L||^2 * integral |a|^2 dmu
  TheoremVerdict verdict;
};

/// Scalar perturbation: gate R < A (the proof's condition; the statement's
/// integral |a|^2 < A/||L|| gate is evaluated and reported alongside), with
/// predicted bounds ((sqrt A - sqrt R)^2, (sqrt B + sqrt R ||K*||)^2).
/// Throws DomainError when L = 0.
PerturbScalarResult perturb_scalar(const OperatorFamily& family, const ModuleOperator& k,
                                   const ModuleOperator& l, const ScalarFamily& a,
                                   const Tolerances& tol = {});

/// Mixed perturbation with positively confined weights a, b and constants
/// 0 <= alpha, beta < 1/2. The hypothesis inequality is sampled (random
/// points plus the coordinate basis), not proven; the verdict says so.
TheoremVerdict perturb_mixed(const OperatorFamily& family, const OperatorFamily& gamma,
                             const ScalarFamily& a, const ScalarFamily& b, double alpha,
                             double beta, const ModuleOperator& k, const Tolerances& tol = {},
                             int hypothesis_samples = 64, uint64_t sample_seed = 0x6d66726d73ULL);

}  // namespace mframes
