#include <CLI11.hpp>
#include <chrono>
#include <iostream>

#include "mframes/harness.hpp"

namespace {

using mframes::FrameReport;
using mframes::LowerBound;
using mframes::Scenario;
using mframes::TheoremVerdict;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

std::string lower_to_text(const LowerBound& lb) {
  switch (lb.kind) {
    case LowerBound::Kind::none: return "none";
    case LowerBound::Kind::unbounded: return "unbounded";
    case LowerBound::Kind::value: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.12g", lb.value);
      return buf;
    }
  }
  return "?";
}

void print_report_text(const FrameReport& report) {
  std::cout << "class: " << mframes::frame_class_name(report.cls.cls);
  if (report.cls.cls == mframes::FrameClass::tight_k_frame ||
      report.cls.cls == mframes::FrameClass::parseval_k_frame)
    std::cout << " (constant " << report.cls.tight_constant << ")";
  if (report.cls.degenerate_k) std::cout << " [degenerate: K = 0]";
  std::cout << "\nlower_opt: " << lower_to_text(report.bounds.lower_opt)
            << "\nupper_opt: " << report.bounds.upper_opt
            << "\nmargins: lower " << report.bounds.margin_lower << ", upper "
            << report.bounds.margin_upper << "\n";
  if (report.margin_claimed_lower)
    std::cout << "claimed lower margin: " << *report.margin_claimed_lower << "\n";
  if (report.margin_claimed_upper)
    std::cout << "claimed upper margin: " << *report.margin_claimed_upper << "\n";
  if (report.douglas_residual)
    std::cout << "douglas residual: " << *report.douglas_residual << "\n";
  else
    std::cout << "douglas factorization: obstructed\n";
}

void print_verdict_text(const TheoremVerdict& v) {
  std::cout << v.theorem << ": "
            << (v.hypotheses_ok ? (v.valid ? "valid" : "INVALID") : "hypotheses not met");
  if (v.vacuous) std::cout << " (vacuous)";
  std::cout << "\n";
  for (const auto& h : v.hypotheses)
    std::cout << "  hypothesis " << h.name << ": " << (h.ok ? "ok" : "failed")
              << " (margin " << h.margin << ")\n";
  for (const auto& c : v.checks)
    std::cout << "  check " << c.name << ": " << (c.ok ? "ok" : "FAILED")
              << " (margin " << c.margin << ")\n";
  for (const auto& note : v.notes) std::cout << "  note: " << note << "\n";
}

// Claimed-bound validation plus every theorem verdict the scenario's optional
// components support.
struct VerifyOutcome {
  FrameReport report;
  std::vector<TheoremVerdict> verdicts;
  bool pass = true;
};

VerifyOutcome run_verify(const Scenario& s) {
  VerifyOutcome out;
  out.report = mframes::compute_frame_report(s.family, s.k, s.claimed_lower,
                                             s.claimed_upper, s.tol);
  const double claim_slack = 1e-12;
  if (out.report.margin_claimed_lower &&
      *out.report.margin_claimed_lower < -claim_slack)
    out.pass = false;
  if (out.report.margin_claimed_upper &&
      *out.report.margin_claimed_upper < -claim_slack)
    out.pass = false;

  if (s.q) {
    out.verdicts.push_back(mframes::compose_right(s.family, s.k, *s.q, s.tol).verdict);
    try {
      out.verdicts.push_back(mframes::invertible_rescale_check(s.family, s.k, *s.q, s.tol));
    } catch (const mframes::RankError&) {
      // singular Q: the rescale theorem does not apply
    }
  }
  if (s.t) {
    out.verdicts.push_back(mframes::k_transfer(s.family, s.k, *s.t, s.tol));
    const auto lc = mframes::left_compose(s.family, *s.t, s.k, s.tol);
    out.verdicts.push_back(lc.restriction);
    out.verdicts.push_back(lc.surjectivity);
  }
  out.verdicts.push_back(mframes::tight_relation(s.family, s.k, s.tol));
  if (s.l && s.a)
    out.verdicts.push_back(mframes::perturb_scalar(s.family, s.k, *s.l, *s.a, s.tol).verdict);
  if (s.gamma && s.a && s.b && s.alpha && s.beta)
    out.verdicts.push_back(mframes::perturb_mixed(s.family, *s.gamma, *s.a, *s.b, *s.alpha,
                                                  *s.beta, s.k, s.tol));
  for (const auto& v : out.verdicts)
    if (v.hypotheses_ok && !v.valid) out.pass = false;
  return out;
}

int emit_verify(const VerifyOutcome& out, const std::string& format) {
  if (format == "json") {
    json verdicts = json::array();
    for (const auto& v : out.verdicts) verdicts.push_back(mframes::verdict_to_json(v));
    const json doc{{"report", mframes::frame_report_to_json(out.report)},
                   {"verdicts", std::move(verdicts)},
                   {"pass", out.pass}};
    std::cout << mframes::canonical_dump(doc);
  } else {
    print_report_text(out.report);
    for (const auto& v : out.verdicts) print_verdict_text(v);
    std::cout << (out.pass ? "PASS" : "FAIL") << "\n";
  }
  return out.pass ? kExitPass : kExitVerificationFailure;
}

int run_paper_example(const std::string& format) {
  const auto started = std::chrono::steady_clock::now();
  const Scenario s = mframes::paper_example_scenario();
  VerifyOutcome out = run_verify(s);

  // The worked example must land exactly on the paper's numbers.
  const auto& bounds = out.report.bounds;
  const bool exact =
      bounds.lower_opt.is_value() && std::abs(bounds.lower_opt.value - 1.0 / 3.0) < 1e-12 &&
      std::abs(bounds.upper_opt - 1.0 / 3.0) < 1e-12 &&
      out.report.cls.cls == mframes::FrameClass::tight_k_frame;
  if (!exact) out.pass = false;
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (format == "json") {
    json verdicts = json::array();
    for (const auto& v : out.verdicts) verdicts.push_back(mframes::verdict_to_json(v));
    const json doc{{"report", mframes::frame_report_to_json(out.report)},
                   {"verdicts", std::move(verdicts)},
                   {"elapsed_seconds", elapsed},
                   {"pass", out.pass}};
    std::cout << mframes::canonical_dump(doc);
    return out.pass ? kExitPass : kExitVerificationFailure;
  }
  print_report_text(out.report);
  for (const auto& v : out.verdicts) print_verdict_text(v);
  std::cout << "elapsed: " << elapsed << " s\n"
            << (out.pass ? "PASS" : "FAIL") << "\n";
  return out.pass ? kExitPass : kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"integral K-operator frame toolkit"};
  app.require_subcommand(1);

  std::string scenario_path, format = "text", suite_name, profile_name = "generic";
  std::string out_path;
  int trials = 200;
  uint64_t seed = 42;
  std::vector<int> shape_sizes = {1, 1};
  int rank = 1, atoms = 4;
  mframes::Tolerances tol;

  auto* verify = app.add_subcommand("verify", "verify a scenario file");
  verify->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  verify->add_option("--tol-psd", tol.psd, "relative PSD tolerance");
  verify->add_option("--tol-bound", tol.bound, "bound comparison tolerance");
  verify->add_option("--tol-commute", tol.commute, "commutation tolerance");
  verify->add_option("--format", format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* paper = app.add_subcommand("paper-example", "run the worked example");
  paper->add_option("--format", format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* suite = app.add_subcommand("suite", "run a randomized verification suite");
  suite->add_option("name", suite_name, "suite name")->required();
  suite->add_option("--trials", trials, "number of trials");
  suite->add_option("--seed", seed, "random seed");
  suite->add_option("--tol-psd", tol.psd, "relative PSD tolerance");
  suite->add_option("--tol-bound", tol.bound, "bound comparison tolerance");
  suite->add_option("--tol-commute", tol.commute, "commutation tolerance");
  suite->add_option("--format", format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* gen = app.add_subcommand("gen", "generate a random scenario");
  gen->add_option("--seed", seed, "random seed")->required();
  gen->add_option("--profile", profile_name,
                  "generic|guaranteed_k_frame|rank_deficient_T|commuting_diag");
  gen->add_option("--out", out_path, "output file")->required();
  gen->add_option("--shape", shape_sizes, "algebra block sizes");
  gen->add_option("--rank", rank, "module rank");
  gen->add_option("--atoms", atoms, "atom count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*verify) {
      Scenario s = mframes::load_scenario(scenario_path);
      if (verify->count("--tol-psd")) s.tol.psd = tol.psd;
      if (verify->count("--tol-bound")) s.tol.bound = tol.bound;
      if (verify->count("--tol-commute")) s.tol.commute = tol.commute;
      return emit_verify(run_verify(s), format);
    }
    if (*paper) return run_paper_example(format);
    if (*suite) {
      mframes::SuiteConfig config;
      config.name = suite_name;
      config.trials = trials;
      config.seed = seed;
      config.tol = tol;
      const mframes::SuiteReport report = mframes::run_theorem_suite(config);
      if (format == "json") {
        std::cout << mframes::canonical_dump(mframes::suite_report_to_json(report));
      } else {
        std::cout << report.suite << ": pass " << report.pass << ", fail " << report.fail
                  << ", skip " << report.skip << " (trials " << report.trials << ", seed "
                  << report.seed << ")\n";
        for (const auto& [key, value] : report.worst_margins)
          std::cout << "  " << key << ": " << value << "\n";
        if (!report.failures.empty())
          std::cout << "  first failure: " << report.failures.front().dump() << "\n";
      }
      return report.fail == 0 ? kExitPass : kExitVerificationFailure;
    }
    if (*gen) {
      mframes::Dims dims{mframes::AlgebraShape(shape_sizes), rank, atoms};
      const Scenario s = mframes::random_instance(
          seed, dims, mframes::profile_from_name(profile_name));
      mframes::save_scenario(s, out_path);
      std::cout << "wrote " << out_path << "\n";
      return kExitPass;
    }
  } catch (const mframes::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mframes::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerificationFailure;
  }
  return kExitUsage;
}
