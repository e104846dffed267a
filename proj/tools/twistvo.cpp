#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "twistvo/harness.hpp"

using namespace twistvo;

namespace {

Exponent exponent_arg(const std::string& flag, const std::string& s) {
  try {
    return parse_exponent(s);
  } catch (const EngineError&) {
    throw ConfigError(flag + ": bad weight '" + s + "'");
  }
}

int cmd_run_suite(const SuiteConfig& cfg, const std::string& report_path, bool quiet) {
  Report r = run_suite(cfg);
  nlohmann::json j = r.to_json();
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) throw ConfigError("cannot write report to " + report_path);
    out << j.dump(2) << "\n";
  }
  if (!quiet)
    for (const CheckRecord& c : r.records)
      if (!c.pass) std::cout << "FAIL " << c.identity << ": " << c.first_mismatch.value_or("") << "\n";
  std::cout << r.model_id << " " << cfg.suite << ": " << r.passed() << "/" << r.records.size() << " passed\n";
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact expansion and identity checks for twisted modules"};
  app.require_subcommand(1);

  SuiteConfig cfg;
  std::string max_weight = "2", module_weight, report_path;
  unsigned seed = 0;
  bool quiet = false;

  auto* run = app.add_subcommand("run_suite", "run a verification suite and emit a JSON report");
  run->add_option("--model", cfg.model, "fermion | boson1 | heis3-unipotent | path to a .model file")->required();
  run->add_option("--suite", cfg.suite, "axioms | jordan | twisted-jacobi | weak-comm | commutator | equivariance | "
                                        "polynomiality | twist-all | mixed-products")
      ->required();
  run->add_option("--max-weight", max_weight, "weight cutoff for algebra vectors");
  run->add_option("--module-max-weight", module_weight, "weight cutoff for module vectors (default: --max-weight)");
  run->add_option("--window", cfg.window, "exponent window half-width");
  run->add_option("--log-bound", cfg.log_bound, "largest log power the engine may carry");
  run->add_option("--jobs", cfg.jobs, "worker threads");
  run->add_option("--report", report_path, "write the JSON report here");
  auto* seed_opt = run->add_option("--seed-order", seed, "shuffle the check order with this seed");
  run->add_option("--mutation", cfg.mutation, "apply a catalogued single-sign fault first");
  run->add_flag("--quiet", quiet, "only print the summary line");

  std::string model, expr;
  long window = 4;
  int logs = 4;
  bool json_out = false;
  auto* expand = app.add_subcommand("expand", "print the expansion of an expression");
  expand->add_option("model", model)->required();
  expand->add_option("expression", expr)->required();
  expand->add_option("--window", window, "exponent window half-width");
  expand->add_option("--log-bound", logs, "largest log power printed");
  expand->add_flag("--json", json_out, "print the terms as a JSON array");

  std::string dmodel, dweight = "2";
  auto* decompose = app.add_subcommand("decompose", "Jordan decomposition of the model automorphism");
  decompose->add_option("model", dmodel)->required();
  decompose->add_option("--max-weight", dweight, "weight cutoff");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      cfg.max_weight = exponent_arg("--max-weight", max_weight);
      if (!module_weight.empty()) cfg.module_max_weight = exponent_arg("--module-max-weight", module_weight);
      if (*seed_opt) cfg.seed_order = seed;
      return cmd_run_suite(cfg, report_path, quiet);
    }
    if (*expand) {
      LoadedModel lm = resolve_model(model);
      Expansion e = expand_expression(lm, expr);
      auto terms = expansion_terms(e, window, logs);
      if (json_out) {
        std::cout << nlohmann::json(terms).dump(2) << "\n";
      } else {
        for (auto& t : terms) std::cout << t << "\n";
        if (terms.empty()) std::cout << "0\n";
      }
      return 0;
    }
    if (*decompose) {
      LoadedModel lm = resolve_model(dmodel);
      std::cout << decompose_report(lm, exponent_arg("--max-weight", dweight));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ExprParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ModelParseError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return 2;
  } catch (const EngineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
