#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "twistvo/model.hpp"
#include "twistvo/twist_operator.hpp"

namespace twistvo {

inline constexpr const char* kEngineVersion = "0.3.0";
inline constexpr int kReportSchema = 1;

// Bad flags, unknown model or suite, or a suite that does not apply.
struct ConfigError : EngineError {
  using EngineError::EngineError;
};

struct SuiteConfig {
  std::string model = "fermion";  // shipped name, alias, or path to a .model file
  std::string suite = "axioms";
  std::string mutation;           // optional id from the mutation catalog
  Exponent max_weight = Exponent(2);
  std::optional<Exponent> module_max_weight;  // defaults to max_weight
  long window = 4;
  int log_bound = 4;
  int jobs = 1;
  std::optional<unsigned> seed_order;  // shuffle the tuple order with this seed
};

const std::vector<std::string>& suite_names();

// A model plus the module the suites act on.
struct LoadedModel {
  std::string id;
  Model model;
  const TwistedModule* module = nullptr;  // shipped module, or the toy
  std::shared_ptr<const TwistOperator> twist;
  bool toy = false;
};
LoadedModel resolve_model(const std::string& name, const std::string& mutation = "");

struct CheckRecord {
  std::string identity;
  std::vector<std::vector<uint32_t>> inputs;  // basis indices per argument
  long window = 0;
  bool pass = true;
  std::optional<std::string> first_mismatch;
  double seconds = 0;
};

struct Report {
  SuiteConfig config;
  std::string model_id;
  std::vector<CheckRecord> records;
  size_t passed() const;
  size_t failed() const;
  bool ok() const { return failed() == 0; }
  nlohmann::json to_json(bool with_timing = true) const;
};

// A single check to run; tuples are enumerated up front so that the order and
// the contents of the report never depend on scheduling.
struct CheckTask {
  std::string identity;
  std::vector<std::vector<uint32_t>> inputs;
  long window = 0;
  std::function<CheckResult()> run;
};

// Runs tasks on `jobs` workers pulling from a shared counter. Results land in
// task order.
std::vector<CheckRecord> run_tasks(const std::vector<CheckTask>& tasks, int jobs);

// Throws ConfigError on a bad config.
Report run_suite(const SuiteConfig& cfg);
// same, on an already loaded model
Report run_suite(const SuiteConfig& cfg, const LoadedModel& lm);

// expression evaluation for `expand`
struct Expansion {
  VSeries series;
  const FockSpace* space = nullptr;
  int var = X;
};
struct ExprParseError : EngineError {
  using EngineError::EngineError;
};
Expansion expand_expression(const LoadedModel& lm, const std::string& expr);
// terms of the series on |exponent| <= half_width, lowest first, one per line
std::vector<std::string> expansion_terms(const Expansion& e, long half_width, int log_bound);

// P_V, nilpotency indices and 2 pi i N per block
std::string decompose_report(const LoadedModel& lm, Exponent max_weight);

}  // namespace twistvo
