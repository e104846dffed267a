#include "twistvo/model.hpp"

#include <fstream>
#include <map>
#include <regex>
#include <sstream>

namespace twistvo {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}


int parse_parity(const std::string& s) {
  if (s == "0") return 0;
  if (s == "1") return 1;
  throw ModelParseError("parity must be 0 or 1, got '" + s + "'");
}

std::string scalar_text(const Scalar& s) {
  if (s.is_rational()) return q_str(s.rational());
  Scalar r = s * Scalar::inv_sqrt2();
  if (r.is_rational()) return q_str(r.rational()) + "*sqrt2";
  r = s * Scalar::sqrt2();
  if (r.is_rational()) return q_str(r.rational()) + "*1/sqrt2";
  for (int k = 1; k < 2 * Scalar::kPhaseDen; ++k) {
    Q q = make_q(k, Scalar::kPhaseDen);
    r = s * Scalar::expi(-q);
    if (r.is_rational()) return q_str(r.rational()) + "*e(" + q_str(q) + ")";
  }
  throw EngineError("scalar " + s.str() + " has no model-file spelling");
}

}  // namespace

Exponent parse_exponent(const std::string& s) {
  try {
    return Exponent(parse_q(s));
  } catch (const std::exception& e) {
    throw ModelParseError("bad exponent '" + s + "'");
  }
}

Scalar parse_scalar(const std::string& text) {
  std::string s = text;
  bool neg = false;
  if (!s.empty() && s[0] == '-') {
    neg = true;
    s = s.substr(1);
  }
  if (s.empty()) throw ModelParseError("empty scalar");
  Scalar r = Scalar::one();
  for (const std::string& f : split(s, '*')) {
    if (f == "sqrt2") {
      r *= Scalar::sqrt2();
    } else if (f == "1/sqrt2") {
      r *= Scalar::inv_sqrt2();
    } else if (f == "Pi") {
      r *= Scalar::pi_pow(1);
    } else if (f.size() > 3 && f.rfind("e(", 0) == 0 && f.back() == ')') {
      Q q;
      try {
        q = parse_q(f.substr(2, f.size() - 3));
      } catch (const std::exception&) {
        throw ModelParseError("bad phase in '" + f + "'");
      }
      if (!is_integer(q * Scalar::kPhaseDen)) throw ModelParseError("phase " + f + " is outside the cyclotomic level");
      r *= Scalar::expi(q);
    } else {
      try {
        r *= parse_q(f);
      } catch (const std::exception&) {
        throw ModelParseError("bad scalar factor '" + f + "'");
      }
    }
  }
  return neg ? -r : r;
}

ModelDesc parse_model(std::istream& in) {
  ModelDesc d;
  std::string line;
  int lineno = 0;
  ModelDesc::ModuleDesc* mod = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<std::string> t;
    for (std::string w; ls >> w;) t.push_back(w);
    if (t.empty()) continue;
    auto need = [&](size_t n) {
      if (t.size() != n) throw ModelParseError("line " + std::to_string(lineno) + ": '" + t[0] + "' takes " + std::to_string(n - 1) + " arguments");
    };
    const std::string& k = t[0];
    try {
      if (k == "name") {
        need(2);
        d.name = t[1];
      } else if (k == "kind") {
        need(2);
        if (t[1] != "fermion" && t[1] != "heisenberg") throw ModelParseError("unknown kind " + t[1]);
        d.kind = t[1];
      } else if (k == "level") {
        need(2);
        d.level = std::stoi(t[1]);
        if (d.level <= 0 || (2 * Scalar::kPhaseDen) % d.level != 0) throw ModelParseError("unsupported cyclotomic level " + t[1]);
      } else if (k == "generator") {
        need(4);
        d.gens.push_back({t[1], parse_parity(t[2]), parse_exponent(t[3])});
      } else if (k == "gram") {
        need(4);
        (mod ? mod->gram : d.gram).push_back({t[1], t[2], parse_scalar(t[3])});
      } else if (k == "conformal") {
        need(3);
        d.conformal.push_back({parse_scalar(t[1]), t[2]});
      } else if (k == "automorphism") {
        need(2);
        d.automorphism = t[1];
      } else if (k == "g") {
        need(4);
        d.g.push_back({t[1], t[2], parse_scalar(t[3])});
      } else if (k == "module") {
        need(2);
        if (d.module) throw ModelParseError("only one module per model");
        d.module = ModelDesc::ModuleDesc{};
        d.module->name = t[1];
        mod = &*d.module;
      } else if (k == "vacuum") {
        need(3);
        if (!mod) throw ModelParseError("vacuum outside a module section");
        mod->vacua.push_back({t[1], parse_parity(t[2])});
      } else if (k == "zero") {
        need(5);
        if (!mod) throw ModelParseError("zero outside a module section");
        mod->zero.push_back({t[1], {t[2], t[3], parse_scalar(t[4])}});
      } else if (k == "gvac") {
        need(4);
        if (!mod) throw ModelParseError("gvac outside a module section");
        mod->gvac.push_back({t[1], t[2], parse_scalar(t[3])});
      } else if (k == "toy") {
        need(2);
        if (t[1] != "nilpotent") throw ModelParseError("unknown toy " + t[1]);
        d.toy = true;
      } else {
        throw ModelParseError("unknown keyword '" + k + "'");
      }
    } catch (const ModelParseError& e) {
      std::string m = e.what();
      if (m.rfind("line ", 0) == 0) throw;
      throw ModelParseError("line " + std::to_string(lineno) + ": " + m);
    } catch (const std::invalid_argument&) {
      throw ModelParseError("line " + std::to_string(lineno) + ": bad number");
    }
  }
  if (d.name.empty()) throw ModelParseError("model has no name");
  if (d.gens.empty()) throw ModelParseError("model has no generators");
  if (d.conformal.empty()) throw ModelParseError("model has no conformal vector");
  if (d.module && d.module->vacua.empty()) d.module->vacua.push_back({"vac", 0});
  return d;
}

ModelDesc load_model(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ModelParseError("cannot open model file " + path);
  return parse_model(f);
}

std::string serialize_model(const ModelDesc& d) {
  std::ostringstream o;
  o << "name " << d.name << "\nkind " << d.kind << "\nlevel " << d.level << "\n";
  for (auto& g : d.gens) o << "generator " << g.name << " " << g.parity << " " << g.weight.str() << "\n";
  for (auto& e : d.gram) o << "gram " << e.row << " " << e.col << " " << scalar_text(e.value) << "\n";
  for (auto& t : d.conformal) o << "conformal " << scalar_text(t.coef) << " " << t.word << "\n";
  o << "automorphism " << d.automorphism << "\n";
  for (auto& e : d.g) o << "g " << e.row << " " << e.col << " " << scalar_text(e.value) << "\n";
  if (d.module) {
    o << "module " << d.module->name << "\n";
    for (auto& [n, p] : d.module->vacua) o << "vacuum " << n << " " << p << "\n";
    for (auto& e : d.module->gram) o << "gram " << e.row << " " << e.col << " " << scalar_text(e.value) << "\n";
    for (auto& [a, e] : d.module->zero) o << "zero " << a << " " << e.row << " " << e.col << " " << scalar_text(e.value) << "\n";
    for (auto& e : d.module->gvac) o << "gvac " << e.row << " " << e.col << " " << scalar_text(e.value) << "\n";
  }
  if (d.toy) o << "toy nilpotent\n";
  return o.str();
}

ModelDesc free_fermion_desc() {
  ModelDesc d;
  d.name = "fermion";
  d.kind = "fermion";
  d.gens = {{"psi", 1, Exponent::frac(1, 2)}};
  d.gram = {{"psi", "psi", Scalar::one()}};
  d.conformal = {{Scalar(make_q(1, 2)), "psi(-3/2)psi(-1/2)"}};
  d.automorphism = "parity";
  d.g = {{"psi", "psi", Scalar(-1)}};
  ModelDesc::ModuleDesc m;
  m.name = "ramond";
  m.vacua = {{"v+", 0}, {"v-", 1}};
  m.zero = {{"psi", {"v-", "v+", Scalar::inv_sqrt2()}}, {"psi", {"v+", "v-", Scalar::inv_sqrt2()}}};
  m.gvac = {{"v+", "v+", Scalar::one()}, {"v-", "v-", Scalar(-1)}};
  d.module = m;
  return d;
}

ModelDesc heisenberg_desc(const std::vector<std::string>& names, const std::vector<std::vector<Q>>& gram) {
  size_t r = names.size();
  if (gram.size() != r) throw EngineError("gram matrix has the wrong size");
  ModelDesc d;
  d.name = "heisenberg" + std::to_string(r);
  d.kind = "heisenberg";
  for (auto& n : names) d.gens.push_back({n, 0, Exponent(1)});
  for (size_t i = 0; i < r; ++i) {
    if (gram[i].size() != r) throw EngineError("gram matrix has the wrong size");
    for (size_t j = i; j < r; ++j) {
      if (gram[i][j] != gram[j][i]) throw EngineError("gram matrix is not symmetric");
      if (gram[i][j] != 0) d.gram.push_back({names[i], names[j], Scalar(gram[i][j])});
    }
  }
  // omega = 1/2 sum G^{-1}_{ij} a_i(-1) a_j(-1), written in PBW order
  Matrix G(r, r);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) G(i, j) = Scalar(gram[i][j]);
  Matrix Gi = inverse(G);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = i; j < r; ++j) {
      Scalar c = (i == j) ? Gi(i, j) * Q(make_q(1, 2)) : Gi(i, j);
      if (!c.is_zero()) d.conformal.push_back({c, names[i] + "(-1)" + names[j] + "(-1)"});
    }
  return d;
}

ModelDesc boson1_desc() {
  ModelDesc d = heisenberg_desc({"h"}, {{Q(1)}});
  d.name = "boson1";
  d.automorphism = "minus1";
  d.g = {{"h", "h", Scalar(-1)}};
  ModelDesc::ModuleDesc m;
  m.name = "z2";
  m.vacua = {{"vac", 0}};
  d.module = m;
  return d;
}

ModelDesc heis3_unipotent_desc() {
  ModelDesc d = heisenberg_desc({"a", "b", "c"}, {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}});
  d.name = "heis3-unipotent";
  d.automorphism = "unipotent";
  d.g = {{"a", "a", Scalar(1)},  {"b", "b", Scalar(1)}, {"c", "c", Scalar(1)},
         {"a", "c", Scalar(1)},  {"c", "b", Scalar(-1)}, {"a", "b", Scalar(make_q(-1, 2))}};
  d.toy = true;
  return d;
}

std::vector<Mutation> mutation_catalog() {
  return {
      {"fermion.omega-sign", "fermion", "conformal vector negated"},
      {"fermion.gram-sign", "fermion", "algebra anticommutator {psi,psi} = -1"},
      {"fermion.module-gram-sign", "fermion", "Ramond anticommutator negated"},
      {"fermion.zero-mode-sign", "fermion", "one entry of the Ramond zero mode negated"},
      {"fermion.iterate-sign", "fermion", "Koszul sign in the module iterate flipped"},
      {"fermion.twist-sign", "fermion", "parity sign dropped from the twist operator"},
      {"boson1.omega-sign", "boson1", "conformal vector negated"},
      {"boson1.gram-sign", "boson1", "algebra bracket [h(m),h(n)] = -m"},
      {"boson1.module-gram-sign", "boson1", "twisted bracket negated"},
      {"boson1.twist-branch", "boson1", "twist substitution uses e^{-pi i}"},
      {"boson1.twist-translation", "boson1", "twist operator translates by e^{-xL(-1)}"},
      {"heis3-unipotent.omega-sign", "heis3-unipotent", "conformal vector negated"},
      {"heis3-unipotent.gram-ab-sign", "heis3-unipotent", "pairing of a with b negated"},
  };
}

ModelDesc apply_mutation(const ModelDesc& src, const std::string& id, EngineFaults* faults) {
  ModelDesc d = src;
  auto dot = id.find('.');
  if (dot == std::string::npos || id.substr(0, dot) != d.name) throw EngineError("mutation " + id + " does not apply to model " + d.name);
  std::string what = id.substr(dot + 1);
  auto module_gram = [&]() -> std::vector<ModelDesc::Entry>& {
    if (!d.module) throw EngineError("model has no module");
    if (d.module->gram.empty()) d.module->gram = d.gram;
    return d.module->gram;
  };
  if (what == "omega-sign") {
    for (auto& t : d.conformal) t.coef = -t.coef;
  } else if (what == "gram-sign" || what == "gram-ab-sign") {
    // the module keeps the original form, so only the algebra changes
    if (d.module && d.module->gram.empty()) d.module->gram = d.gram;
    d.gram.front().value = -d.gram.front().value;
  } else if (what == "module-gram-sign") {
    auto& g = module_gram();
    g.front().value = -g.front().value;
  } else if (what == "zero-mode-sign") {
    if (!d.module || d.module->zero.empty()) throw EngineError("model has no zero modes");
    d.module->zero.front().second.value = -d.module->zero.front().second.value;
  } else if (what == "iterate-sign") {
    faults->flip_iterate_sign = true;
  } else if (what == "twist-sign") {
    faults->drop_twist_sign = true;
  } else if (what == "twist-branch") {
    faults->twist_conjugate_branch = true;
  } else if (what == "twist-translation") {
    faults->twist_negative_translation = true;
  } else {
    throw EngineError("unknown mutation " + id);
  }
  return d;
}

Vec apply_word(const FockSpace& F, const std::string& word, const Vec& v) {
  static const std::regex tok(R"(([A-Za-z_][A-Za-z0-9_]*)\(([^()]*)\))");
  std::vector<std::pair<int, Exponent>> modes;
  size_t pos = 0;
  for (std::sregex_iterator it(word.begin(), word.end(), tok), end; it != end; ++it) {
    if (size_t(it->position()) != pos) throw ModelParseError("bad mode word '" + word + "'");
    pos = it->position() + it->length();
    std::string name = (*it)[1];
    int a = -1;
    for (size_t i = 0; i < F.num_generators(); ++i)
      if (F.generator(int(i)).name == name) a = int(i);
    if (a < 0) throw ModelParseError("unknown generator '" + name + "' in '" + word + "'");
    Exponent n = parse_exponent((*it)[2]);
    if (!F.mode_allowed(a, n)) throw ModelParseError("mode " + name + "(" + n.str() + ") is not in this space");
    modes.push_back({a, n});
  }
  if (pos != word.size()) throw ModelParseError("bad mode word '" + word + "'");
  Vec r = v;
  for (auto it = modes.rbegin(); it != modes.rend(); ++it) r = F.apply(it->first, it->second, r);
  return r;
}

LinearMap derivation_from_generators(std::shared_ptr<const FockSpace> F, Matrix M) {
  return [F, M](const Vec& v) {
    return v.map([&](uint32_t id) {
      FockState s = F->state(id);
      Vec total;
      for (size_t i = 0; i < s.modes.size(); ++i) {
        Vec r = Vec::basis(F->vacuum(s.vac));
        for (size_t j = s.modes.size(); j-- > 0;) {
          const Mode& m = s.modes[j];
          if (j != i) {
            r = F->apply(m.gen, m.n, r);
            continue;
          }
          Vec next;
          for (size_t b = 0; b < M.rows(); ++b)
            if (!M(b, m.gen).is_zero()) next += M(b, m.gen) * F->apply(int(b), m.n, r);
          r = std::move(next);
        }
        total += r;
      }
      return total;
    });
  };
}

namespace {

int index_of(const std::vector<std::string>& names, const std::string& n, const char* what) {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == n) return int(i);
  throw ModelParseError(std::string("unknown ") + what + " '" + n + "'");
}

Matrix symmetric_matrix(const std::vector<std::string>& names, const std::vector<ModelDesc::Entry>& es) {
  Matrix m(names.size(), names.size());
  for (auto& e : es) {
    int i = index_of(names, e.row, "generator"), j = index_of(names, e.col, "generator");
    m(i, j) = e.value;
    m(j, i) = e.value;
  }
  return m;
}

Matrix square_matrix(const std::vector<std::string>& names, const std::vector<ModelDesc::Entry>& es, const char* what) {
  Matrix m(names.size(), names.size());
  for (auto& e : es) m(index_of(names, e.row, what), index_of(names, e.col, what)) = e.value;
  return m;
}

}  // namespace

Model build_model(const ModelDesc& d, const BuildOptions& opt) {
  Model M;
  M.desc = d;
  std::vector<std::string> gnames;
  FockSpec vs;
  for (auto& g : d.gens) {
    if (d.kind == "fermion" && g.parity != 1) throw ModelParseError("fermion generators must be odd");
    if (d.kind == "heisenberg" && g.parity != 0) throw ModelParseError("Heisenberg generators must be even");
    gnames.push_back(g.name);
    vs.gens.push_back({g.name, g.parity, g.weight});
    vs.coset.push_back((Exponent(1) - g.weight).residue());
  }
  vs.gram = symmetric_matrix(gnames, d.gram);
  vs.zero_modes.assign(gnames.size(), Matrix(1, 1));
  auto V = std::make_shared<const FockSpace>(vs);
  M.V = V;
  M.YV = std::make_shared<const VertexEngine>(V, V, std::vector<Exponent>(gnames.size()));
  Vec vac = Vec::basis(V->vacuum());
  for (auto& t : d.conformal) M.omega += t.coef * apply_word(*V, t.word, vac);

  Matrix G = d.g.empty() ? Matrix::identity(gnames.size()) : square_matrix(gnames, d.g, "generator");
  auto g = std::make_shared<const Automorphism>(V, G);
  if (opt.require_isometry) g->require_isometry();
  M.g = g;
  M.jordan = std::make_shared<const JordanDecomposition>(jordan_decompose(*g, opt.jordan_cutoff));
  JordanBlock gen = decompose_block(G, spectrum_candidates(G));
  if (!gen.two_pi_i_N.is_zero()) M.N = derivation_from_generators(V, gen.two_pi_i_N * (Scalar(make_q(1, 2)) * Scalar::pi_pow(-1)));

  if (d.module) {
    const auto& md = *d.module;
    std::vector<Exponent> alpha;
    for (size_t a = 0; a < gnames.size(); ++a) {
      for (size_t b = 0; b < gnames.size(); ++b)
        if (a != b && !G(a, b).is_zero()) throw EngineError("a twisted module needs g diagonal on the generators");
      alpha.push_back(alpha_of_root(G(a, a)));
    }
    FockSpec ws;
    ws.gens = vs.gens;
    ws.gram = md.gram.empty() ? vs.gram : symmetric_matrix(gnames, md.gram);
    std::vector<std::string> vnames;
    for (auto& [n, p] : md.vacua) {
      vnames.push_back(n);
      ws.vac_names.push_back(n);
      ws.vac_parity.push_back(p);
    }
    ws.vac_names.erase(ws.vac_names.begin());
    ws.vac_parity.erase(ws.vac_parity.begin());
    for (size_t a = 0; a < gnames.size(); ++a) ws.coset.push_back((alpha[a] + Exponent(1) - vs.gens[a].weight).residue());
    ws.zero_modes.assign(gnames.size(), Matrix(vnames.size(), vnames.size()));
    for (auto& [a, e] : md.zero) {
      int i = index_of(gnames, a, "generator");
      if (ws.coset[i] != Exponent(0)) throw ModelParseError("generator " + a + " has no zero mode in module " + md.name);
      ws.zero_modes[i](index_of(vnames, e.row, "vacuum"), index_of(vnames, e.col, "vacuum")) = e.value;
    }
    auto W = std::make_shared<const FockSpace>(ws);
    auto Y0 = std::make_shared<const VertexEngine>(V, W, alpha, opt.faults.flip_iterate_sign);
    Matrix gv = md.gvac.empty() ? Matrix::identity(vnames.size()) : square_matrix(vnames, md.gvac, "vacuum");
    auto gW = std::make_shared<const Automorphism>(W, G, gv);
    TwistedModule::Parts p;
    p.name = md.name;
    p.Y0 = Y0;
    p.YV = M.YV;
    p.omega = M.omega;
    p.g_V = g;
    p.g_W = gW;
    p.jordan = M.jordan;
    p.faults = opt.faults;
    M.module = std::make_shared<const TwistedModule>(p);
  }
  if (d.toy) {
    if (!M.N) throw EngineError("the nilpotent toy needs a non-semisimple automorphism");
    TwistedModule::Parts p;
    p.name = d.name + "-toy";
    p.Y0 = M.YV;
    p.YV = M.YV;
    p.omega = M.omega;
    p.N_V = M.N;
    p.N_W = M.N;
    p.g_V = g;
    p.g_W = g;
    p.jordan = M.jordan;
    // nilpotency of N on the decomposed range, minus one
    for (auto& b : M.jordan->blocks) p.log_bound = std::max(p.log_bound, b.nilpotency_index - 1);
    p.faults = opt.faults;
    M.toy = std::make_shared<const TwistedModule>(p);
  }
  return M;
}

Vec Model::generator(const std::string& name) const {
  for (size_t i = 0; i < V->num_generators(); ++i)
    if (V->generator(int(i)).name == name) return Vec::basis(V->generator_state(int(i)));
  throw EngineError("unknown generator " + name);
}

Vec Model::word(const std::string& w) const { return apply_word(*V, w, Vec::basis(V->vacuum())); }

}  // namespace twistvo
