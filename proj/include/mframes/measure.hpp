#pragma once

#include <optional>
#include <vector>

#include "mframes/hilbert_module.hpp"

namespace mframes {

/// Weighted atoms standing in for the measure space (Omega, mu). Continuous
/// measures enter only through quadrature on an interval; the discretized
/// family is the object of study.
struct MeasureDiscretization {
  struct Atom {
    double node = 0.0;
    double weight = 0.0;
  };
  enum class Source { discrete, interval };
  enum class Rule { midpoint, gauss_legendre };

  Source source = Source::discrete;
  double a = 0.0, b = 0.0;  // interval endpoints (interval source only)
  Rule rule = Rule::gauss_legendre;
  int n = 0;                  // quadrature order (interval source only)
  bool explicit_nodes = false;  // discrete atoms carried node values
  std::vector<Atom> atoms;

  static MeasureDiscretization discrete(const std::vector<double>& weights);
  static MeasureDiscretization discrete_with_nodes(std::vector<Atom> atoms);
  static MeasureDiscretization interval(double a, double b, Rule rule, int n);

  int size() const { return static_cast<int>(atoms.size()); }
  double total_weight() const;
  bool aligned_with(const MeasureDiscretization& other) const;
};

/// Gauss-Legendre nodes and weights on [a, b] (Newton iteration on the
/// Legendre recurrence, machine-precision roots).
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Discretized measurable family omega -> T_omega: one operator per atom.
class OperatorFamily {
 public:
  OperatorFamily() = default;
  OperatorFamily(MeasureDiscretization disc, std::vector<ModuleOperator> ops);

  const MeasureDiscretization& disc() const { return disc_; }
  const std::vector<ModuleOperator>& ops() const { return ops_; }
  const ModuleOperator& op(int k) const { return ops_[static_cast<size_t>(k)]; }
  int size() const { return static_cast<int>(ops_.size()); }
  const AlgebraShape& shape() const { return ops_.front().shape(); }
  int rank() const { return ops_.front().rank(); }

  /// Polynomial generator coefficients this family was built from, if any
  /// (kept for serialization round-trips).
  const std::optional<std::vector<ModuleOperator>>& generator() const { return generator_; }

  friend OperatorFamily family_from_generator(std::vector<ModuleOperator> coeffs,
                                              const MeasureDiscretization& disc);

 private:
  MeasureDiscretization disc_;
  std::vector<ModuleOperator> ops_;
  std::optional<std::vector<ModuleOperator>> generator_;
};

/// Evaluate T_omega = sum_d omega^d C_d at every node of the discretization.
OperatorFamily family_from_generator(std::vector<ModuleOperator> coeffs,
                                     const MeasureDiscretization& disc);

/// Element of the discretized l^2(Omega, H): one module vector per atom.
class L2Vector {
 public:
  L2Vector() = default;
  L2Vector(MeasureDiscretization disc, std::vector<ModuleVector> entries);

  const MeasureDiscretization& disc() const { return disc_; }
  const std::vector<ModuleVector>& entries() const { return entries_; }
  const ModuleVector& entry(int k) const { return entries_[static_cast<size_t>(k)]; }
  int size() const { return static_cast<int>(entries_.size()); }

 private:
  MeasureDiscretization disc_;
  std::vector<ModuleVector> entries_;
};

/// <xf,yf> = sum_k w_k <x_k, y_k>; the quadrature realization of the
/// integral inner product on l^2(Omega, H).
AlgebraElement l2_inner(const L2Vector& xf, const L2Vector& yf);
double l2_norm(const L2Vector& xf);

/// Scalar family a_omega aligned with a discretization.
struct ScalarFamily {
  std::vector<Complex> values;

  ScalarFamily() = default;
  explicit ScalarFamily(std::vector<Complex> vals) : values(std::move(vals)) {}

  int size() const { return static_cast<int>(values.size()); }
  /// 0 < inf |a_k| <= sup |a_k| < inf, with all values real and positive.
  bool positively_confined(double* inf_out = nullptr, double* sup_out = nullptr) const;
  /// Quadrature value of the integral of |a_omega|^2.
  double weighted_abs2(const MeasureDiscretization& disc) const;
};

}  // namespace mframes
