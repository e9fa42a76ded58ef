#pragma once

#include <cstdint>
#include <random>

#include "mframes/hilbert_module.hpp"

namespace mframes {

/// Deterministic random source. mt19937_64 is fully specified by the
/// standard and the uniform mapping below avoids std::uniform_real_distribution,
/// whose output is implementation-defined; identical seeds therefore give
/// identical draws on every toolchain.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(gen_() % static_cast<uint64_t>(hi - lo + 1));
  }

  /// Uniform on the closed unit disc (rejection sampling).
  Complex unit_disc() {
    for (;;) {
      const double re = uniform(-1.0, 1.0);
      const double im = uniform(-1.0, 1.0);
      if (re * re + im * im <= 1.0) return {re, im};
    }
  }

 private:
  std::mt19937_64 gen_;
};

/// Stable seed mixing for per-trial substreams (splitmix64 step).
inline uint64_t mix_seed(uint64_t seed, uint64_t index) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

AlgebraElement random_element(Rng& rng, const AlgebraShape& shape);
ModuleVector random_vector(Rng& rng, const AlgebraShape& shape, int rank);
ModuleOperator random_operator(Rng& rng, const AlgebraShape& shape, int rank);
/// Operator whose cell matrix and blocks are all diagonal; any two such
/// operators commute.
ModuleOperator random_diagonal_operator(Rng& rng, const AlgebraShape& shape, int rank);

}  // namespace mframes
