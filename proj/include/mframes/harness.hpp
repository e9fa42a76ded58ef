#pragma once

#include <map>
#include <vector>

#include "mframes/scenario.hpp"

namespace mframes {

struct Dims {
  AlgebraShape shape;
  int rank = 1;
  int atoms = 4;
};

enum class Profile { generic, guaranteed_k_frame, rank_deficient_t, commuting_diag };

Profile profile_from_name(const std::string& name);
std::string profile_name(Profile profile);

/// Deterministic random scenario. Entries are drawn uniformly from the unit
/// disc and families are normalized so ||S|| = 1, keeping PSD margins
/// numerically meaningful.
///   generic            - unconstrained draws; K and S occasionally rank-deficient
///   guaranteed_k_frame - one atom is a scaled K*, forcing a positive lower bound
///   rank_deficient_t   - commuting diagonal draws with invertible K and a
///                        rank-deficient T (surjectivity suite input)
///   commuting_diag     - all operators diagonal in a common basis, so the
///                        commutation hypotheses of the composition theorems
///                        hold by construction
Scenario random_instance(uint64_t seed, const Dims& dims, Profile profile,
                         int max_coord_dim = 64);

struct SuiteConfig {
  std::string name;
  int trials = 200;
  uint64_t seed = 42;
  Tolerances tol;
  int threads = 0;  // 0: take MFRAMES_THREADS, else hardware concurrency
};

struct SuiteReport {
  std::string suite;
  int trials = 0;
  uint64_t seed = 0;
  int pass = 0;
  int fail = 0;
  int skip = 0;  // hypothesis-filtered retries exhausted; never silently hidden
  std::map<std::string, double> worst_margins;
  std::vector<nlohmann::json> failures;  // failing scenario/verdict dumps (capped)
};

const std::vector<std::string>& suite_names();

/// Run one named verification suite over a deterministic random_instance
/// stream. Reports are deterministic for fixed (seed, trials, tolerances)
/// regardless of thread count; a nonzero fail count marks a
/// hypotheses_ok && !valid outcome (or an equivalence disagreement).
SuiteReport run_theorem_suite(const SuiteConfig& config);

nlohmann::json suite_report_to_json(const SuiteReport& report);

/// Thread budget: explicit request, else MFRAMES_THREADS, else hardware.
int resolve_thread_count(int requested);

}  // namespace mframes
