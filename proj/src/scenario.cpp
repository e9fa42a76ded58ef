#include "mframes/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mframes {

using nlohmann::json;

namespace {

std::string fmt_double(double d) {
  if (!std::isfinite(d)) throw NumericError("non-finite value cannot be serialized");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", d);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void dump_rec(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump_rec(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        dump_rec(v, out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float:
      out += fmt_double(j.get<double>());
      break;
    default:
      out += j.dump();
      break;
  }
}

[[noreturn]] void fail(const std::string& message, const std::string& path) {
  throw ParseError(message, path.empty() ? "/" : path);
}

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail("expected an object", path);
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing key '") + key + "'", path + "/" + key);
  return *it;
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail("expected a number", path);
  return j.get<double>();
}

int int_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail("expected an integer", path);
  return j.get<int>();
}

Complex complex_at(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail("expected a number or [re, im] pair", path);
}

json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

}  // namespace

json shape_to_json(const AlgebraShape& shape) {
  return json{{"block_sizes", shape.block_sizes}};
}

AlgebraShape shape_from_json(const json& j, const std::string& path) {
  const json& sizes = member(j, "block_sizes", path);
  if (!sizes.is_array() || sizes.empty())
    fail("block_sizes must be a non-empty array", path + "/block_sizes");
  std::vector<int> block_sizes;
  for (size_t i = 0; i < sizes.size(); ++i) {
    const int n = int_at(sizes[i], path + "/block_sizes/" + std::to_string(i));
    if (n < 1) fail("block sizes must be >= 1", path + "/block_sizes/" + std::to_string(i));
    block_sizes.push_back(n);
  }
  return AlgebraShape(std::move(block_sizes));
}

json element_to_json(const AlgebraElement& a) {
  json blocks = json::array();
  for (int k = 0; k < a.num_blocks(); ++k) {
    const auto& b = a.block(k);
    json rows = json::array();
    for (Eigen::Index p = 0; p < b.rows(); ++p) {
      json row = json::array();
      for (Eigen::Index q = 0; q < b.cols(); ++q) row.push_back(complex_to_json(b(p, q)));
      rows.push_back(std::move(row));
    }
    blocks.push_back(std::move(rows));
  }
  return json{{"block_sizes", a.shape().block_sizes}, {"blocks", std::move(blocks)}};
}

AlgebraElement element_from_json(const json& j, const std::string& path) {
  const AlgebraShape shape = shape_from_json(j, path);
  const json& blocks = member(j, "blocks", path);
  if (!blocks.is_array() || blocks.size() != static_cast<size_t>(shape.num_blocks()))
    fail("blocks must match block_sizes", path + "/blocks");
  std::vector<Eigen::MatrixXcd> mats;
  for (int k = 0; k < shape.num_blocks(); ++k) {
    const int n = shape.block_sizes[static_cast<size_t>(k)];
    const std::string bpath = path + "/blocks/" + std::to_string(k);
    const json& rows = blocks[static_cast<size_t>(k)];
    if (!rows.is_array() || rows.size() != static_cast<size_t>(n))
      fail("block must have " + std::to_string(n) + " rows", bpath);
    Eigen::MatrixXcd mat(n, n);
    for (int p = 0; p < n; ++p) {
      const json& row = rows[static_cast<size_t>(p)];
      const std::string rpath = bpath + "/" + std::to_string(p);
      if (!row.is_array() || row.size() != static_cast<size_t>(n))
        fail("row must have " + std::to_string(n) + " entries", rpath);
      for (int q = 0; q < n; ++q)
        mat(p, q) = complex_at(row[static_cast<size_t>(q)], rpath + "/" + std::to_string(q));
    }
    if (!mat.allFinite()) fail("block entries must be finite", bpath);
    mats.push_back(std::move(mat));
  }
  return AlgebraElement(shape, std::move(mats));
}

json vector_to_json(const ModuleVector& x) {
  json coords = json::array();
  for (int i = 0; i < x.rank(); ++i) coords.push_back(element_to_json(x.coord(i)));
  return json{{"rank", x.rank()}, {"coords", std::move(coords)}};
}

ModuleVector vector_from_json(const json& j, const std::string& path) {
  const int rank = int_at(member(j, "rank", path), path + "/rank");
  const json& coords = member(j, "coords", path);
  if (!coords.is_array() || coords.size() != static_cast<size_t>(rank))
    fail("coords must have rank entries", path + "/coords");
  std::vector<AlgebraElement> elems;
  for (size_t i = 0; i < coords.size(); ++i)
    elems.push_back(element_from_json(coords[i], path + "/coords/" + std::to_string(i)));
  return ModuleVector(elems.front().shape(), std::move(elems));
}

json operator_to_json(const ModuleOperator& t) {
  json cells = json::array();
  for (int i = 0; i < t.rank(); ++i) {
    json row = json::array();
    for (int j2 = 0; j2 < t.rank(); ++j2) row.push_back(element_to_json(t.cell(i, j2)));
    cells.push_back(std::move(row));
  }
  return json{{"rank", t.rank()}, {"cells", std::move(cells)}};
}

ModuleOperator operator_from_json(const json& j, const std::string& path) {
  const int rank = int_at(member(j, "rank", path), path + "/rank");
  if (rank < 1) fail("rank must be >= 1", path + "/rank");
  const json& cells = member(j, "cells", path);
  if (!cells.is_array() || cells.size() != static_cast<size_t>(rank))
    fail("cells must have rank rows", path + "/cells");
  std::vector<AlgebraElement> elems;
  for (int i = 0; i < rank; ++i) {
    const json& row = cells[static_cast<size_t>(i)];
    const std::string rpath = path + "/cells/" + std::to_string(i);
    if (!row.is_array() || row.size() != static_cast<size_t>(rank))
      fail("cell row must have rank entries", rpath);
    for (int c = 0; c < rank; ++c)
      elems.push_back(element_from_json(row[static_cast<size_t>(c)],
                                        rpath + "/" + std::to_string(c)));
  }
  return ModuleOperator(elems.front().shape(), rank, std::move(elems));
}

json measure_to_json(const MeasureDiscretization& disc) {
  if (disc.source == MeasureDiscretization::Source::interval) {
    return json{{"type", "interval"},
                {"a", disc.a},
                {"b", disc.b},
                {"rule", disc.rule == MeasureDiscretization::Rule::midpoint ? "midpoint"
                                                                            : "gauss"},
                {"n", disc.n}};
  }
  json atoms = json::array();
  for (const auto& atom : disc.atoms) {
    json entry{{"w", atom.weight}};
    if (disc.explicit_nodes) entry["node"] = atom.node;
    atoms.push_back(std::move(entry));
  }
  return json{{"type", "discrete"}, {"atoms", std::move(atoms)}};
}

MeasureDiscretization measure_from_json(const json& j, const std::string& path) {
  const json& type = member(j, "type", path);
  if (!type.is_string()) fail("measure type must be a string", path + "/type");
  const std::string kind = type.get<std::string>();
  if (kind == "interval") {
    const double a = number_at(member(j, "a", path), path + "/a");
    const double b = number_at(member(j, "b", path), path + "/b");
    if (!(a < b)) fail("interval requires a < b", path + "/a");
    const json& rule = member(j, "rule", path);
    if (!rule.is_string()) fail("rule must be a string", path + "/rule");
    const std::string rule_name = rule.get<std::string>();
    MeasureDiscretization::Rule r;
    if (rule_name == "gauss" || rule_name == "gauss_legendre")
      r = MeasureDiscretization::Rule::gauss_legendre;
    else if (rule_name == "midpoint")
      r = MeasureDiscretization::Rule::midpoint;
    else
      fail("unknown quadrature rule '" + rule_name + "'", path + "/rule");
    const int n = int_at(member(j, "n", path), path + "/n");
    if (n < 1) fail("quadrature order must be >= 1", path + "/n");
    return MeasureDiscretization::interval(a, b, r, n);
  }
  if (kind == "discrete") {
    const json& atoms = member(j, "atoms", path);
    if (!atoms.is_array() || atoms.empty())
      fail("discrete measure needs at least one atom", path + "/atoms");
    bool has_nodes = false;
    std::vector<MeasureDiscretization::Atom> parsed;
    for (size_t i = 0; i < atoms.size(); ++i) {
      const std::string apath = path + "/atoms/" + std::to_string(i);
      const double w = number_at(member(atoms[i], "w", apath), apath + "/w");
      if (!(w > 0.0)) fail("atom weight must be positive", apath + "/w");
      MeasureDiscretization::Atom atom;
      atom.weight = w;
      if (atoms[i].contains("node")) {
        atom.node = number_at(atoms[i]["node"], apath + "/node");
        has_nodes = true;
      } else {
        atom.node = static_cast<double>(i);
      }
      parsed.push_back(atom);
    }
    if (has_nodes) return MeasureDiscretization::discrete_with_nodes(std::move(parsed));
    std::vector<double> weights;
    weights.reserve(parsed.size());
    for (const auto& atom : parsed) weights.push_back(atom.weight);
    return MeasureDiscretization::discrete(weights);
  }
  fail("unknown measure type '" + kind + "'", path + "/type");
}

json family_to_json(const OperatorFamily& family) {
  json out{{"measure", measure_to_json(family.disc())}};
  if (family.generator()) {
    json coeffs = json::array();
    for (const auto& c : *family.generator()) coeffs.push_back(operator_to_json(c));
    out["generator"] = json{{"coeffs", std::move(coeffs)}};
  } else {
    json ops = json::array();
    for (const auto& op : family.ops()) ops.push_back(operator_to_json(op));
    out["ops"] = std::move(ops);
  }
  return out;
}

OperatorFamily family_from_json(const json& j, const std::string& path) {
  MeasureDiscretization disc = measure_from_json(member(j, "measure", path), path + "/measure");
  const bool has_ops = j.contains("ops");
  const bool has_gen = j.contains("generator");
  if (has_ops == has_gen)
    fail("family needs exactly one of 'ops' or 'generator'", path);
  if (has_gen) {
    const json& coeffs = member(j["generator"], "coeffs", path + "/generator");
    if (!coeffs.is_array() || coeffs.empty())
      fail("generator coeffs must be a non-empty array", path + "/generator/coeffs");
    std::vector<ModuleOperator> parsed;
    for (size_t i = 0; i < coeffs.size(); ++i)
      parsed.push_back(operator_from_json(coeffs[i],
                                          path + "/generator/coeffs/" + std::to_string(i)));
    return family_from_generator(std::move(parsed), disc);
  }
  const json& ops = j["ops"];
  if (!ops.is_array() || ops.size() != static_cast<size_t>(disc.size()))
    fail("ops must match the atom count", path + "/ops");
  std::vector<ModuleOperator> parsed;
  for (size_t i = 0; i < ops.size(); ++i)
    parsed.push_back(operator_from_json(ops[i], path + "/ops/" + std::to_string(i)));
  return OperatorFamily(std::move(disc), std::move(parsed));
}

namespace {

json scalar_family_to_json(const ScalarFamily& fam) {
  json values = json::array();
  for (const Complex& v : fam.values) {
    if (v.imag() == 0.0) values.push_back(v.real());
    else values.push_back(complex_to_json(v));
  }
  return json{{"values", std::move(values)}};
}

ScalarFamily scalar_family_from_json(const json& j, const std::string& path) {
  const json& values = member(j, "values", path);
  if (!values.is_array() || values.empty())
    fail("values must be a non-empty array", path + "/values");
  std::vector<Complex> parsed;
  for (size_t i = 0; i < values.size(); ++i)
    parsed.push_back(complex_at(values[i], path + "/values/" + std::to_string(i)));
  return ScalarFamily(std::move(parsed));
}

}  // namespace

json scenario_to_json(const Scenario& s) {
  json out{{"shape", shape_to_json(s.shape)},
           {"rank", s.rank},
           {"family", family_to_json(s.family)},
           {"K", operator_to_json(s.k)}};
  if (s.t) out["T"] = operator_to_json(*s.t);
  if (s.q) out["Q"] = operator_to_json(*s.q);
  if (s.l) out["L"] = operator_to_json(*s.l);
  if (s.gamma) out["gamma"] = family_to_json(*s.gamma);
  if (s.a) out["a"] = scalar_family_to_json(*s.a);
  if (s.b) out["b"] = scalar_family_to_json(*s.b);
  if (s.alpha) out["alpha"] = *s.alpha;
  if (s.beta) out["beta"] = *s.beta;
  if (s.claimed_lower || s.claimed_upper) {
    json claimed = json::object();
    if (s.claimed_lower) claimed["lower"] = *s.claimed_lower;
    if (s.claimed_upper) claimed["upper"] = *s.claimed_upper;
    out["claimed"] = std::move(claimed);
  }
  out["tolerances"] =
      json{{"psd", s.tol.psd}, {"bound", s.tol.bound}, {"commute", s.tol.commute}};
  return out;
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  s.shape = shape_from_json(member(j, "shape", ""), "/shape");
  s.rank = int_at(member(j, "rank", ""), "/rank");
  if (s.rank < 1) fail("rank must be >= 1", "/rank");
  s.family = family_from_json(member(j, "family", ""), "/family");
  s.k = operator_from_json(member(j, "K", ""), "/K");

  const auto check_component = [&](const ModuleOperator& op, const char* name) {
    if (!(op.shape() == s.shape) || op.rank() != s.rank)
      throw StructuralError(std::string(name) + " does not match the scenario shape/rank");
  };
  if (!(s.family.shape() == s.shape) || s.family.rank() != s.rank)
    throw StructuralError("family does not match the scenario shape/rank");
  check_component(s.k, "K");

  if (j.contains("T")) { s.t = operator_from_json(j["T"], "/T"); check_component(*s.t, "T"); }
  if (j.contains("Q")) { s.q = operator_from_json(j["Q"], "/Q"); check_component(*s.q, "Q"); }
  if (j.contains("L")) { s.l = operator_from_json(j["L"], "/L"); check_component(*s.l, "L"); }
  if (j.contains("gamma")) {
    s.gamma = family_from_json(j["gamma"], "/gamma");
    if (!(s.gamma->shape() == s.shape) || s.gamma->rank() != s.rank)
      throw StructuralError("gamma family does not match the scenario shape/rank");
  }
  if (j.contains("a")) s.a = scalar_family_from_json(j["a"], "/a");
  if (j.contains("b")) s.b = scalar_family_from_json(j["b"], "/b");
  if (j.contains("alpha")) s.alpha = number_at(j["alpha"], "/alpha");
  if (j.contains("beta")) s.beta = number_at(j["beta"], "/beta");
  if (j.contains("claimed")) {
    const json& claimed = j["claimed"];
    if (claimed.contains("lower")) s.claimed_lower = number_at(claimed["lower"], "/claimed/lower");
    if (claimed.contains("upper")) s.claimed_upper = number_at(claimed["upper"], "/claimed/upper");
  }
  if (j.contains("tolerances")) {
    const json& tols = j["tolerances"];
    if (tols.contains("psd")) s.tol.psd = number_at(tols["psd"], "/tolerances/psd");
    if (tols.contains("bound")) s.tol.bound = number_at(tols["bound"], "/tolerances/bound");
    if (tols.contains("commute"))
      s.tol.commute = number_at(tols["commute"], "/tolerances/commute");
  }
  return s;
}

std::string canonical_dump(const json& j, int /*indent*/) {
  std::string out;
  dump_rec(j, out);
  out += '\n';
  return out;
}

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), "/");
  }
  return scenario_from_json(j);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'", "/");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string dump_scenario(const Scenario& s) { return canonical_dump(scenario_to_json(s)); }

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open file '" + path + "' for writing", "/");
  out << dump_scenario(s);
}

namespace {

json lower_bound_to_json(const LowerBound& lb) {
  switch (lb.kind) {
    case LowerBound::Kind::none: return "none";
    case LowerBound::Kind::unbounded: return "unbounded";
    case LowerBound::Kind::value: return lb.value;
  }
  return nullptr;
}

}  // namespace

json frame_report_to_json(const FrameReport& report) {
  json margins{{"lower", report.bounds.margin_lower},
               {"upper", report.bounds.margin_upper}};
  if (report.margin_claimed_lower) margins["claimed_lower"] = *report.margin_claimed_lower;
  if (report.margin_claimed_upper) margins["claimed_upper"] = *report.margin_claimed_upper;
  json out{{"lower_opt", lower_bound_to_json(report.bounds.lower_opt)},
           {"upper_opt", report.bounds.upper_opt},
           {"class", frame_class_name(report.cls.cls)},
           {"margins", std::move(margins)},
           {"douglas_residual",
            report.douglas_residual ? json(*report.douglas_residual) : json(nullptr)}};
  if (report.cls.cls == FrameClass::tight_k_frame ||
      report.cls.cls == FrameClass::parseval_k_frame)
    out["tight_constant"] = report.cls.tight_constant;
  if (report.cls.degenerate_k) out["degenerate_k"] = true;
  if (report.bounds.lower_claimed) out["lower_claimed"] = *report.bounds.lower_claimed;
  if (report.bounds.upper_claimed) out["upper_claimed"] = *report.bounds.upper_claimed;
  return out;
}

json verdict_to_json(const TheoremVerdict& verdict) {
  json hypotheses = json::object();
  for (const auto& h : verdict.hypotheses)
    hypotheses[h.name] = json{{"ok", h.ok}, {"margin", h.margin}};
  json checks = json::object();
  for (const auto& c : verdict.checks)
    checks[c.name] = json{{"ok", c.ok}, {"margin", c.margin}};
  json out{{"theorem", verdict.theorem},
           {"hypotheses", std::move(hypotheses)},
           {"hypotheses_ok", verdict.hypotheses_ok},
           {"predicted", json{{"lower", lower_bound_to_json(verdict.predicted.lower_opt)},
                              {"upper", verdict.predicted.upper_opt}}},
           {"optimal", json{{"lower", lower_bound_to_json(verdict.optimal.lower_opt)},
                            {"upper", verdict.optimal.upper_opt}}},
           {"valid", verdict.valid},
           {"witness", verdict.witness ? vector_to_json(*verdict.witness) : json(nullptr)}};
  if (!verdict.checks.empty()) out["checks"] = std::move(checks);
  if (verdict.vacuous) out["vacuous"] = true;
  if (!verdict.notes.empty()) out["notes"] = verdict.notes;
  return out;
}

Scenario paper_example_scenario() {
  Scenario s;
  s.shape = AlgebraShape({1, 1});
  s.rank = 1;
  const AlgebraElement e11 = AlgebraElement::scalar_blocks(s.shape, {1.0, 0.0});
  const ModuleOperator coeff1 = ModuleOperator::right_mult(e11);
  const ModuleOperator coeff0 = ModuleOperator::zero(s.shape, 1);
  s.family = family_from_generator(
      {coeff0, coeff1},
      MeasureDiscretization::interval(0.0, 1.0,
                                      MeasureDiscretization::Rule::gauss_legendre, 2));
  s.k = coeff1;
  s.claimed_lower = 0.25;
  s.claimed_upper = 1.0 / 3.0;
  return s;
}

}  // namespace mframes
