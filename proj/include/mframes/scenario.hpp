#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "mframes/transforms.hpp"

namespace mframes {

/// One verification scenario: the family under study, the operator K it is
/// framed against, and whichever optional components the theorems need.
struct Scenario {
  AlgebraShape shape;
  int rank = 1;
  OperatorFamily family;
  ModuleOperator k;
  std::optional<ModuleOperator> t, q, l;
  std::optional<OperatorFamily> gamma;
  std::optional<ScalarFamily> a, b;
  std::optional<double> alpha, beta;
  std::optional<double> claimed_lower, claimed_upper;
  Tolerances tol;
};

// JSON encoders for the wire formats shared by all modules. Objects dump with
// sorted keys; floats print with 17 significant digits (canonical form).
nlohmann::json shape_to_json(const AlgebraShape& shape);
nlohmann::json element_to_json(const AlgebraElement& a);
nlohmann::json vector_to_json(const ModuleVector& x);
nlohmann::json operator_to_json(const ModuleOperator& t);
nlohmann::json measure_to_json(const MeasureDiscretization& disc);
nlohmann::json family_to_json(const OperatorFamily& family);
nlohmann::json scenario_to_json(const Scenario& s);

AlgebraShape shape_from_json(const nlohmann::json& j, const std::string& path);
AlgebraElement element_from_json(const nlohmann::json& j, const std::string& path);
ModuleVector vector_from_json(const nlohmann::json& j, const std::string& path);
ModuleOperator operator_from_json(const nlohmann::json& j, const std::string& path);
MeasureDiscretization measure_from_json(const nlohmann::json& j, const std::string& path);
OperatorFamily family_from_json(const nlohmann::json& j, const std::string& path);
Scenario scenario_from_json(const nlohmann::json& j);

/// Canonical serialization: keys sorted, floats formatted with 17 significant
/// digits (a trailing ".0" keeps integral floats typed as floats), so
/// save ∘ load is the identity on canonical documents, byte for byte.
std::string canonical_dump(const nlohmann::json& j, int indent = 0);

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text);
void save_scenario(const Scenario& s, const std::string& path);
std::string dump_scenario(const Scenario& s);

nlohmann::json frame_report_to_json(const FrameReport& report);
nlohmann::json verdict_to_json(const TheoremVerdict& verdict);

/// The paper's worked example: H = A^1 over A = C ⊕ C, T_omega right
/// multiplication by diag(omega, 0) on Lebesgue [0,1] (two-point Gauss rule,
/// exact for omega^2), K right multiplication by diag(1, 0), claimed bounds
/// (1/4, 1/3).
Scenario paper_example_scenario();

}  // namespace mframes
