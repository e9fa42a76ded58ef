#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mframes {

/// Shape or rank mismatch between algebra elements, module vectors or operators.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input outside an operation's domain (sqrt of a non-positive element, zero
/// perturbation operator, quadrature order < 1, ...).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what, double min_eig = 0.0)
      : std::runtime_error(what), min_eig(min_eig) {}
  double min_eig;
};

/// Non-finite values where finite numbers are required.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Inversion of a singular operator; carries the offending singular value.
struct RankError : std::runtime_error {
  RankError(const std::string& what, double sigma_min)
      : std::runtime_error(what), sigma_min(sigma_min) {}
  double sigma_min;
};

/// A functional-calculus result failed to pull back into cell form. Guards
/// numerical drift; should not occur for well-conditioned inputs.
struct RepresentationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed scenario or JSON document; `where` is a JSON-pointer-style location.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::string location)
      : std::runtime_error(what + " at " + location), where(std::move(location)) {}
  std::string where;
};

}  // namespace mframes
