#include <algorithm>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "twistvo/harness.hpp"

using namespace twistvo;

namespace {

Exponent ex(long n, long d = 1) { return Exponent::frac(n, d); }

SuiteConfig cfg(const std::string& model, const std::string& suite, Exponent w, long window) {
  SuiteConfig c;
  c.model = model;
  c.suite = suite;
  c.max_weight = w;
  c.window = window;
  return c;
}

std::vector<std::string> keys(const Report& r) {
  std::vector<std::string> out;
  for (auto& c : r.records) out.push_back(c.identity + nlohmann::json(c.inputs).dump());
  return out;
}

}  // namespace

TEST_CASE("config errors") {
  CHECK_THROWS_AS(run_suite(cfg("fermion", "no-such-suite", ex(1), 2)), ConfigError);
  CHECK_THROWS_AS(resolve_model("no-such-model"), ConfigError);
  CHECK_THROWS_AS(resolve_model("fermion", "boson1.omega-sign"), ConfigError);
  // the toy only supports the decomposition checks
  CHECK_THROWS_AS(run_suite(cfg("toy", "twisted-jacobi", ex(1), 2)), ConfigError);
  SuiteConfig c = cfg("heis3", "twist-all", ex(1), 2);
  c.log_bound = 1;
  CHECK_THROWS_AS(run_suite(c), ConfigError);
  for (auto& s : {"axioms", "jordan", "twisted-jacobi", "twist-all", "mixed-products"})
    CHECK(std::count(suite_names().begin(), suite_names().end(), s) == 1);
}

TEST_CASE("reports are deterministic across runs and worker counts") {
  SuiteConfig c = cfg("ramond", "twisted-jacobi", ex(1), 3);
  c.module_max_weight = ex(1, 2);
  Report a = run_suite(c);
  Report b = run_suite(c);
  REQUIRE(a.records.size() > 3);
  CHECK(a.ok());
  CHECK(a.to_json(false).dump() == b.to_json(false).dump());
  c.jobs = 3;
  Report p = run_suite(c);
  // the config echo differs in jobs only
  nlohmann::json ja = a.to_json(false), jp = p.to_json(false);
  CHECK(ja["checks"] == jp["checks"]);
  CHECK(ja["summary"] == jp["summary"]);
  CHECK(ja["schema_version"] == kReportSchema);
  CHECK(ja["engine_version"] == kEngineVersion);
  CHECK(ja["summary"]["total"] == a.records.size());
  CHECK(!ja["checks"][0].contains("timing"));
  CHECK(a.to_json(true)["checks"][0].contains("timing"));

  c.jobs = 1;
  c.seed_order = 5;
  Report s = run_suite(c);
  auto ka = keys(a), ks = keys(s);
  CHECK(ka != ks);
  std::sort(ka.begin(), ka.end());
  std::sort(ks.begin(), ks.end());
  CHECK(ka == ks);
}

TEST_CASE("a mutated model fails with a located mismatch") {
  SuiteConfig c = cfg("fermion", "axioms", ex(2), 3);
  c.mutation = "fermion.omega-sign";
  Report r = run_suite(c);
  CHECK(!r.ok());
  CHECK(r.model_id == "fermion+fermion.omega-sign");
  auto bad = std::find_if(r.records.begin(), r.records.end(), [](auto& x) { return !x.pass; });
  REQUIRE(bad != r.records.end());
  REQUIRE(bad->first_mismatch);
  CHECK(bad->first_mismatch->find(" at ") != std::string::npos);
  CHECK(r.to_json(false)["checks"][0]["status"] == "fail");
}

TEST_CASE("a throwing check becomes a failed record") {
  std::vector<CheckTask> tasks(2);
  tasks[0].identity = "ok";
  tasks[0].run = [] { return CheckResult{}; };
  tasks[1].identity = "boom";
  tasks[1].run = []() -> CheckResult { throw EngineError("no"); };
  auto rec = run_tasks(tasks, 2);
  REQUIRE(rec.size() == 2);
  CHECK(rec[0].pass);
  CHECK(!rec[1].pass);
  CHECK(rec[1].first_mismatch->find("no") != std::string::npos);
}

TEST_CASE("expand") {
  LoadedModel f = resolve_model("fermion");
  auto t = expansion_terms(expand_expression(f, "Y(psi,x) psi"), 3, 2);
  REQUIRE(!t.empty());
  CHECK(t.front() == "x^-1 vac");

  LoadedModel r = resolve_model("ramond");
  t = expansion_terms(expand_expression(r, "Ytw(vac,x) psi"), 2, 2);
  REQUIRE(!t.empty());
  CHECK(t.front() == "e^{-πi/2}·2^{-1/2}·x^{-1/2} v-");

  // Yg on the module vacuum: the zero mode shows up at x^{-1/2}
  t = expansion_terms(expand_expression(r, "Yg(psi,x) v+"), 2, 2);
  CHECK(!t.empty());

  CHECK_THROWS_AS(expand_expression(f, "Y(psi,x"), ExprParseError);
  CHECK_THROWS_AS(expand_expression(f, "Y(psi,q) psi"), ExprParseError);
  CHECK_THROWS_AS(expand_expression(f, "psi(1/x) vac"), ExprParseError);
  CHECK_THROWS_AS(expand_expression(f, "Y(vac, x) psi extra"), ExprParseError);
}

TEST_CASE("decompose report") {
  std::string s = decompose_report(resolve_model("fermion"), ex(2));
  CHECK(s.find("P_V = {0,1/2}") != std::string::npos);
  CHECK(s.find("N = 0") != std::string::npos);
  s = decompose_report(resolve_model("heis3"), ex(2));
  CHECK(s.find("nilpotency index 3") != std::string::npos);
  CHECK(s.find("N = nonzero") != std::string::npos);

  // identity automorphism from a model file
  std::string path = "harness_test_identity.model";
  {
    std::ofstream out(path);
    out << serialize_model(heisenberg_desc({"h"}, {{Q(1)}}));
  }
  LoadedModel id = resolve_model(path);
  std::remove(path.c_str());
  s = decompose_report(id, ex(2));
  // no module to act on
  CHECK_THROWS_AS(expand_expression(id, "Yg(h,x) vac"), EngineError);
  CHECK(!expansion_terms(expand_expression(id, "Y(h,x) h"), 2, 1).empty());
  CHECK(s.find("P_V = {0}") != std::string::npos);
  CHECK(s.find("N = 0") != std::string::npos);
}
