#include "twistvo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "twistvo/twisted_checks.hpp"
#include "twistvo/vosa.hpp"

namespace twistvo {

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"axioms",       "jordan",        "twisted-jacobi",
                                              "weak-comm",    "commutator",    "equivariance",
                                              "polynomiality", "twist-all",    "mixed-products"};
  return names;
}

// ------------------------------------------------------------------ models

LoadedModel resolve_model(const std::string& name, const std::string& mutation) {
  static const std::map<std::string, std::string> aliases{
      {"fermion", "fermion"}, {"ramond", "fermion"},       {"boson1", "boson1"},
      {"boson", "boson1"},    {"z2", "boson1"},            {"heis3-unipotent", "heis3-unipotent"},
      {"heis3", "heis3-unipotent"}, {"toy", "heis3-unipotent"}};
  ModelDesc d;
  std::string id;
  if (auto it = aliases.find(name); it != aliases.end()) {
    id = it->second;
    if (id == "fermion")
      d = free_fermion_desc();
    else if (id == "boson1")
      d = boson1_desc();
    else
      d = heis3_unipotent_desc();
  } else if (std::filesystem::exists(name)) {
    d = load_model(name);
    id = d.name;
  } else {
    throw ConfigError("unknown model '" + name + "' (shipped: fermion, boson1, heis3-unipotent, or a .model path)");
  }

  BuildOptions opt;
  if (!mutation.empty()) {
    auto cat = mutation_catalog();
    auto it = std::find_if(cat.begin(), cat.end(), [&](const Mutation& m) { return m.id == mutation; });
    if (it == cat.end()) throw ConfigError("unknown mutation '" + mutation + "'");
    if (it->model != id) throw ConfigError("mutation '" + mutation + "' applies to " + it->model + ", not " + id);
    d = apply_mutation(d, mutation, &opt.faults);
    // a flipped Gram sign is exactly what the mutation is about
    opt.require_isometry = false;
    id += "+" + mutation;
  }

  LoadedModel lm;
  lm.id = id;
  lm.model = build_model(d, opt);
  if (lm.model.module) {
    lm.module = lm.model.module.get();
  } else if (lm.model.toy) {
    lm.module = lm.model.toy.get();
    lm.toy = true;
  }
  if (lm.module) lm.twist = std::make_shared<const TwistOperator>(*lm.module);
  return lm;
}

// ------------------------------------------------------------------ reports

size_t Report::passed() const {
  return std::count_if(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
}
size_t Report::failed() const { return records.size() - passed(); }

nlohmann::json Report::to_json(bool with_timing) const {
  using nlohmann::json;
  json cfg{{"model", config.model},
           {"suite", config.suite},
           {"max_weight", config.max_weight.str()},
           {"module_max_weight", config.module_max_weight.value_or(config.max_weight).str()},
           {"window", config.window},
           {"log_bound", config.log_bound},
           {"jobs", config.jobs}};
  cfg["mutation"] = config.mutation.empty() ? json(nullptr) : json(config.mutation);
  cfg["seed_order"] = config.seed_order ? json(*config.seed_order) : json(nullptr);

  json checks = json::array();
  for (const CheckRecord& r : records) {
    json c{{"identity", r.identity}, {"inputs", r.inputs}, {"window", r.window}, {"status", r.pass ? "pass" : "fail"}};
    if (r.first_mismatch) c["first_mismatch"] = *r.first_mismatch;
    if (with_timing) c["timing"] = {{"seconds", r.seconds}};
    checks.push_back(std::move(c));
  }
  return json{{"schema_version", kReportSchema},
              {"engine_version", kEngineVersion},
              {"model", model_id},
              {"config", cfg},
              {"summary", {{"total", records.size()}, {"passed", passed()}, {"failed", failed()}}},
              {"checks", checks}};
}

// ------------------------------------------------------------------ runner

std::vector<CheckRecord> run_tasks(const std::vector<CheckTask>& tasks, int jobs) {
  std::vector<CheckRecord> out(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < tasks.size(); i = next++) {
      const CheckTask& t = tasks[i];
      CheckRecord& r = out[i];
      r.identity = t.identity;
      r.inputs = t.inputs;
      r.window = t.window;
      auto t0 = std::chrono::steady_clock::now();
      try {
        if (CheckResult res = t.run()) {
          r.pass = false;
          r.first_mismatch = res->what == t.identity ? res->where : res->what + ": " + res->where;
        }
      } catch (const std::exception& e) {
        r.pass = false;
        r.first_mismatch = std::string("error: ") + e.what();
      }
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  int n = std::max(1, std::min<int>(jobs, int(tasks.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

namespace {

std::vector<uint32_t> ids_of(const Vec& v) {
  std::vector<uint32_t> out;
  for (auto& e : v.entries()) out.push_back(e.first);
  return out;
}

std::vector<Vec> basis_vecs(const FockSpace& F, Exponent max_level) {
  std::vector<Vec> out;
  for (uint32_t id : F.basis_upto(max_level)) out.push_back(Vec::basis(id));
  return out;
}

// all sequences of length len over n items
void sequences(size_t n, size_t len, std::vector<std::vector<size_t>>& out) {
  std::vector<size_t> cur(len, 0);
  if (len == 0) {
    out.push_back(cur);
    return;
  }
  if (n == 0) return;
  while (true) {
    out.push_back(cur);
    size_t i = len;
    while (i > 0 && ++cur[i - 1] == n) cur[--i] = 0;
    if (i == 0) return;
  }
}

// e^{2 pi i N} on V, from the finite exponential series
LinearMap unipotent_part(const JordanDecomposition& J) {
  return [&J](const Vec& v) {
    Vec total = v, term = v;
    for (long k = 1; !term.is_zero(); ++k) {
      term = J.apply_two_pi_i_N(term) * Scalar(Q(1) / Q(k));
      total += term;
    }
    return total;
  };
}

std::string block_where(const FockSpace& F, const JordanBlock& b) {
  std::string s = "block at weight " + b.level.str() + " {";
  for (size_t i = 0; i < b.basis.size(); ++i) s += (i ? ", " : "") + F.name(b.basis[i]);
  return s + "}";
}

struct SuiteBuilder {
  const SuiteConfig& cfg;
  const LoadedModel& lm;
  std::vector<CheckTask> tasks;
  std::shared_ptr<JordanDecomposition> jordan;  // owned here for the lifetime of the tasks

  Exponent wV() const { return cfg.max_weight; }
  Exponent wW() const { return cfg.module_max_weight.value_or(cfg.max_weight); }

  void add(std::string identity, std::vector<std::vector<uint32_t>> inputs, std::function<CheckResult()> run) {
    tasks.push_back({std::move(identity), std::move(inputs), cfg.window, std::move(run)});
  }

  const TwistedModule& module(bool allow_toy) const {
    if (!lm.module) throw ConfigError("model " + lm.id + " has no twisted module; suite " + cfg.suite + " needs one");
    if (lm.toy && !allow_toy)
      throw ConfigError("model " + lm.id + " only carries the nilpotent toy, which supports the decompositions in twist-all");
    return *lm.module;
  }

  void axioms() {
    const Model& m = lm.model;
    Exponent cut = wV();
    add("axioms", {ids_of(Vec::basis(m.V->vacuum()))}, [&m, cut] { return check_axioms(*m.YV, m.omega, cut); });
  }

  void jordan_suite() {
    const Model& m = lm.model;
    jordan = std::make_shared<JordanDecomposition>(jordan_decompose(*m.g, wV()));
    const JordanDecomposition& J = *jordan;
    std::vector<Exponent> cands = spectrum_candidates(m.g->on_generators());
    for (const JordanBlock& b : J.blocks) {
      const FockSpace& F = *m.V;
      std::vector<uint32_t> in = b.basis;
      add("jordan-exp", {in}, [&F, &b]() -> CheckResult {
        if (b.semisimple * exp_nilpotent(b.two_pi_i_N) == b.g) return std::nullopt;
        return CheckFailure{"jordan-exp", block_where(F, b) + " at e^{2 pi i S} e^{2 pi i N} != g"};
      });
      add("jordan-commute", {in}, [&F, &b]() -> CheckResult {
        if (b.semisimple * b.two_pi_i_N == b.two_pi_i_N * b.semisimple) return std::nullopt;
        return CheckFailure{"jordan-commute", block_where(F, b) + " at S N != N S"};
      });
      add("jordan-idempotent", {in}, [&F, &b, cands]() -> CheckResult {
        JordanBlock again = decompose_block(b.semisimple * exp_nilpotent(b.two_pi_i_N), cands);
        if (again.semisimple == b.semisimple && again.two_pi_i_N == b.two_pi_i_N && again.projector == b.projector)
          return std::nullopt;
        return CheckFailure{"jordan-idempotent", block_where(F, b) + " at redecomposition"};
      });
    }
    Exponent cut = wV();
    long hw = cfg.window;
    add("derivation", {}, [&m, &J, cut, hw] { return check_derivation(*m.YV, J, cut, hw); });
    add("conjugation", {}, [&m, &J, cut, hw] { return check_conjugation(*m.YV, J, cut, hw); });
    add("homomorphism-semisimple", {}, [&m, &J, cut, hw] {
      return check_homomorphism(*m.YV, [&J](const Vec& v) { return J.apply_semisimple(v); }, cut, hw);
    });
    add("homomorphism-unipotent", {}, [&m, &J, cut, hw] { return check_homomorphism(*m.YV, unipotent_part(J), cut, hw); });
  }

  // (u, v, w) with u, v in V and w in W
  template <class F>
  void triples(const std::string& identity, F f) {
    const TwistedModule& M = module(false);
    auto Vb = basis_vecs(M.V(), wV());
    auto Wb = basis_vecs(M.W(), wW());
    long hw = cfg.window;
    for (auto& u : Vb)
      for (auto& v : Vb)
        for (auto& w : Wb) add(identity, {ids_of(u), ids_of(v), ids_of(w)}, [&M, f, u, v, w, hw] { return f(M, u, v, w, hw); });
  }

  void equivariance() {
    const TwistedModule& M = module(false);
    long hw = cfg.window;
    for (auto& u : basis_vecs(M.V(), wV()))
      for (auto& w : basis_vecs(M.W(), wW())) {
        std::vector<std::vector<uint32_t>> in{ids_of(u), ids_of(w)};
        add("equivariance", in, [&M, u, w, hw] { return check_equivariance(M, u, w, hw); });
        add("g-compatibility", in, [&M, u, w, hw] { return check_g_compatibility(M, u, w, hw); });
        add("L(-1)-derivative", in, [&M, u, w, hw] { return check_L_minus1_derivative_W(M, u, w, hw); });
      }
  }

  void polynomiality() {
    const TwistedModule& M = module(false);
    auto Vb = basis_vecs(M.V(), wV());
    auto Wb = basis_vecs(M.W(), wW());
    long hw = cfg.window;
    for (size_t k = 1; k <= 3; ++k) {
      std::vector<std::vector<size_t>> seqs;
      sequences(Vb.size(), k, seqs);
      for (auto& s : seqs) {
        std::vector<Vec> vs;
        std::vector<std::vector<uint32_t>> in;
        for (size_t i : s) {
          vs.push_back(Vb[i]);
          in.push_back(ids_of(Vb[i]));
        }
        for (auto& w : Wb) {
          auto inw = in;
          inw.push_back(ids_of(w));
          add("product-polynomiality", inw, [&M, vs, w, hw] { return check_product_polynomiality(M, vs, w, hw); });
          if (k >= 2) {
            // one transposition and, for k = 3, one 3-cycle generate the symmetric group
            std::vector<int> swap(k), cyc(k);
            for (size_t i = 0; i < k; ++i) {
              swap[i] = int(i);
              cyc[i] = int((i + 1) % k);
            }
            std::swap(swap[0], swap[1]);
            add("permutation-symmetry", inw, [&M, vs, w, swap, hw] { return check_permutation_symmetry(M, vs, w, swap, hw); });
            if (k == 3)
              add("permutation-symmetry", inw, [&M, vs, w, cyc, hw] { return check_permutation_symmetry(M, vs, w, cyc, hw); });
          }
        }
      }
    }
  }

  void twist_all() {
    const TwistedModule& M = module(true);
    const TwistOperator& T = *lm.twist;
    auto Vb = basis_vecs(M.V(), wV());
    auto Wb = basis_vecs(M.W(), wW());
    long hw = cfg.window;
    for (auto& u : Vb)
      for (auto& w : Wb)
        add("y0-decomposition", {ids_of(u), ids_of(w)}, [&M, u, w, hw] { return check_y0_decomposition(M, u, w, hw); });
    for (auto& w : Wb)
      for (auto& v : Vb)
        add("twist-decomposition", {ids_of(w), ids_of(v)}, [&T, w, v, hw] { return check_twist_decomposition(T, w, v, hw); });
    // the remaining identities need a genuine twisted module
    if (lm.toy) return;
    for (auto& w : Wb) add("twist-vacuum", {ids_of(w)}, [&T, w, hw] { return check_twist_vacuum(T, w, hw); });
    for (auto& w : Wb)
      for (auto& v : Vb)
        add("twist-L(-1)", {ids_of(w), ids_of(v)}, [&T, w, v, hw] { return check_L_minus1_twist(T, w, v, hw); });
    for (auto& u : Vb)
      for (auto& v : Vb)
        for (auto& w : Wb) {
          std::vector<std::vector<uint32_t>> in{ids_of(u), ids_of(v), ids_of(w)};
          add("weak-associativity", in, [&T, u, v, w, hw] { return check_weak_associativity(T, u, v, w, hw); });
          add("twist-jacobi", in, [&T, u, v, w, hw] { return check_twist_jacobi(T, u, v, w, hw); });
          add("gen-commutator", in, [&T, u, v, w, hw] { return check_gen_commutator(T, u, v, w, hw); });
          add("gen-weak-commutativity", in, [&T, u, v, w, hw] { return check_gen_weak_commutativity(T, u, v, w, hw); });
        }
  }

  void mixed_products() {
    module(false);
    const TwistOperator& T = *lm.twist;
    auto Vb = basis_vecs(T.module().V(), wV());
    auto Wb = basis_vecs(T.module().W(), wW());
    long hw = cfg.window;
    for (size_t k = 0; k <= 2; ++k)
      for (size_t l = 0; k + l <= 2; ++l) {
        std::vector<std::vector<size_t>> seqs;
        sequences(Vb.size(), k + l, seqs);
        for (auto& s : seqs)
          for (auto& w : Wb)
            for (auto& v : Vb) {
              std::vector<Vec> left, right;
              std::vector<std::vector<uint32_t>> in;
              for (size_t i = 0; i < s.size(); ++i) {
                (i < k ? left : right).push_back(Vb[s[i]]);
                in.push_back(ids_of(Vb[s[i]]));
              }
              in.push_back(ids_of(w));
              in.push_back(ids_of(v));
              add("mixed-product", in, [&T, left, w, right, v, hw] { return check_mixed_product(T, left, w, right, v, hw); });
              for (int pos = 0; pos < int(k + l); ++pos)
                add("mixed-permutation", in,
                    [&T, left, w, right, v, pos, hw] { return check_mixed_permutation(T, left, w, right, v, pos, hw); });
            }
      }
  }
};

}  // namespace

Report run_suite(const SuiteConfig& cfg) {
  if (cfg.window <= 0) throw ConfigError("--window must be positive");
  if (cfg.max_weight < Exponent(0)) throw ConfigError("--max-weight must be nonnegative");
  if (std::find(suite_names().begin(), suite_names().end(), cfg.suite) == suite_names().end())
    throw ConfigError("unknown suite '" + cfg.suite + "'");
  LoadedModel lm;
  try {
    lm = resolve_model(cfg.model, cfg.mutation);
  } catch (const ConfigError&) {
    throw;
  } catch (const EngineError& e) {
    throw ConfigError(std::string("cannot build model: ") + e.what());
  }
  return run_suite(cfg, lm);
}

Report run_suite(const SuiteConfig& cfg, const LoadedModel& lm) {
  if (cfg.window <= 0) throw ConfigError("--window must be positive");
  if (cfg.jobs <= 0) throw ConfigError("--jobs must be positive");
  if (lm.module && lm.module->log_bound() > cfg.log_bound)
    throw ConfigError("module " + lm.module->name() + " needs log powers up to " + std::to_string(lm.module->log_bound()) +
                      ", above --log-bound " + std::to_string(cfg.log_bound));

  SuiteBuilder b{cfg, lm, {}, nullptr};
  const std::string& s = cfg.suite;
  if (s == "axioms")
    b.axioms();
  else if (s == "jordan")
    b.jordan_suite();
  else if (s == "twisted-jacobi")
    b.triples("twisted-jacobi", [](auto& M, auto& u, auto& v, auto& w, long hw) { return check_twisted_jacobi(M, u, v, w, hw); });
  else if (s == "weak-comm")
    b.triples("twisted-weak-commutativity",
              [](auto& M, auto& u, auto& v, auto& w, long hw) { return check_twisted_weak_commutativity(M, u, v, w, hw); });
  else if (s == "commutator")
    b.triples("commutator-formula",
              [](auto& M, auto& u, auto& v, auto& w, long hw) { return check_commutator_formula(M, u, v, w, hw); });
  else if (s == "equivariance")
    b.equivariance();
  else if (s == "polynomiality")
    b.polynomiality();
  else if (s == "twist-all")
    b.twist_all();
  else if (s == "mixed-products")
    b.mixed_products();
  else
    throw ConfigError("unknown suite '" + s + "'");

  if (cfg.seed_order) {
    std::mt19937 rng(*cfg.seed_order);
    std::shuffle(b.tasks.begin(), b.tasks.end(), rng);
  }
  Report r;
  r.config = cfg;
  r.model_id = lm.id;
  r.records = run_tasks(b.tasks, cfg.jobs);
  return r;
}

}  // namespace twistvo
