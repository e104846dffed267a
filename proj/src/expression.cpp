#include <cctype>
#include <memory>
#include <sstream>

#include "twistvo/fields.hpp"
#include "twistvo/harness.hpp"

namespace twistvo {

namespace {

// expr  := op '(' expr ',' var ')' expr | name '(' rational ')' expr | name
// op    := Y | Yg | Ytw
// Y acts on V, Yg is the twisted module field, Ytw the twist operator taking
// a module vector first and acting on V.
struct Ast {
  enum Kind { Atom, Mode, Apply } kind = Atom;
  std::string name;  // atom, mode generator, or operator
  Exponent n;        // mode index
  int var = X;
  std::shared_ptr<Ast> arg, rest;
};
using AstPtr = std::shared_ptr<Ast>;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  AstPtr parse() {
    AstPtr e = expr();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ExprParseError("parse error at column " + std::to_string(i_ + 1) + ": " + msg + " in \"" + s_ + "\"");
  }
  void skip() {
    while (i_ < s_.size() && std::isspace((unsigned char)s_[i_])) ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  std::string ident() {
    skip();
    size_t b = i_;
    if (i_ >= s_.size() || !(std::isalpha((unsigned char)s_[i_]) || s_[i_] == '_')) fail("expected a name");
    while (i_ < s_.size() && (std::isalnum((unsigned char)s_[i_]) || s_[i_] == '_')) ++i_;
    // vacuum names such as v+ and v-
    if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) ++i_;
    return s_.substr(b, i_ - b);
  }
  std::string rational() {
    skip();
    size_t b = i_;
    if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) ++i_;
    while (i_ < s_.size() && (std::isdigit((unsigned char)s_[i_]) || s_[i_] == '/')) ++i_;
    if (b == i_) fail("expected a mode index");
    return s_.substr(b, i_ - b);
  }

  AstPtr expr() {
    auto a = std::make_shared<Ast>();
    a->name = ident();
    bool op = a->name == "Y" || a->name == "Yg" || a->name == "Ytw";
    if (op) {
      a->kind = Ast::Apply;
      expect('(');
      a->arg = expr();
      expect(',');
      std::string v = ident();
      a->var = var_from_name(v);
      if (a->var < 0) fail("unknown variable '" + v + "'");
      expect(')');
      a->rest = expr();
      return a;
    }
    if (peek('(')) {
      ++i_;
      a->kind = Ast::Mode;
      std::string r = rational();
      try {
        a->n = parse_exponent(r);
      } catch (const EngineError&) {
        fail("bad mode index '" + r + "'");
      }
      expect(')');
      a->rest = expr();
      return a;
    }
    return a;
  }

  const std::string& s_;
  size_t i_ = 0;
};

enum Space { SpaceV, SpaceW };

struct Evaluator {
  const LoadedModel& lm;

  const FockSpace& space(Space s) const { return s == SpaceV ? *lm.model.V : lm.module->W(); }
  const TwistedModule& module() const {
    if (!lm.module) throw EngineError("model " + lm.id + " has no twisted module");
    return *lm.module;
  }

  Vec vec(const AstPtr& a, Space s) const {
    if (a->kind == Ast::Apply) throw EngineError("operator " + a->name + " used where a vector is needed");
    if (s == SpaceW) module();
    const FockSpace& F = space(s);
    if (a->kind == Ast::Mode) return apply_word(F, a->name + "(" + a->n.str() + ")", vec(a->rest, s));
    if (a->name == "vac") return Vec::basis(F.vacuum(0));
    for (uint32_t j = 0; j < F.spec().vac_names.size(); ++j)
      if (F.spec().vac_names[j] == a->name) return Vec::basis(F.vacuum(j));
    if (s == SpaceV) return lm.model.generator(a->name);
    throw EngineError("'" + a->name + "' is not a module vector; apply modes to a vacuum");
  }

  // g-weight of the vector an expression produces
  Exponent alpha(const AstPtr& a, Space s) const {
    if (!lm.module) return Exponent(0);
    if (a->kind != Ast::Apply) {
      Vec v = vec(a, s);
      return s == SpaceV ? module().alpha_of(v) : Exponent(0);
    }
    if (a->name == "Y") return (alpha(a->arg, SpaceV) + alpha(a->rest, SpaceV)).residue();
    return Exponent(0);  // module vectors carry no g-weight here
  }

  struct Value {
    std::vector<Factor> factors;
    Vec base;
    std::optional<VSeries> iterate;
  };

  Value eval(const AstPtr& a, Space s) const {
    if (a->kind != Ast::Apply) return Value{{}, vec(a, s), std::nullopt};
    const std::string& op = a->name;
    if (op == "Y" && s != SpaceV) throw EngineError("Y produces algebra vectors; use Yg on the module");
    if (op != "Y" && s != SpaceW) throw EngineError(op + " produces module vectors");
    Space in = (op == "Yg") ? SpaceW : SpaceV;
    Value inner = eval(a->rest, in);
    if (inner.iterate) throw EngineError("an iterate must be the outermost operator");

    if (a->arg->kind == Ast::Apply) {
      // Yg(Y(u,x0)v, x2)w and Ytw(Yg(u,x0)w, x2)v
      const AstPtr& in_op = a->arg;
      if (!inner.factors.empty()) throw EngineError("an iterate must act on a vector");
      if (in_op->arg->kind == Ast::Apply || in_op->rest->kind == Ast::Apply)
        throw EngineError("iterates nest only one level deep");
      if (op == "Yg" && in_op->name == "Y") {
        Vec u = vec(in_op->arg, SpaceV), v = vec(in_op->rest, SpaceV);
        return Value{{}, {}, module_iterate(module(), u, in_op->var, v, a->var, inner.base)};
      }
      if (op == "Ytw" && in_op->name == "Yg") {
        Vec u = vec(in_op->arg, SpaceV), w = vec(in_op->rest, SpaceW);
        return Value{{}, {}, lm.twist->twist_iterate(u, in_op->var, w, a->var, inner.base)};
      }
      throw EngineError("unsupported iterate " + op + "(" + in_op->name + "(...))");
    }

    Factor f;
    if (op == "Y") {
      f = algebra_factor(*lm.model.YV, vec(a->arg, SpaceV), a->var);
    } else if (op == "Yg") {
      f = module_factor(module(), vec(a->arg, SpaceV), a->var);
    } else {
      module();
      f = twist_factor(*lm.twist, vec(a->arg, SpaceW), a->var, alpha(a->rest, SpaceV));
    }
    inner.factors.insert(inner.factors.begin(), std::move(f));
    return inner;
  }
};

}  // namespace

Expansion expand_expression(const LoadedModel& lm, const std::string& expr) {
  AstPtr a = Parser(expr).parse();
  Evaluator ev{lm};
  Space out = (a->kind == Ast::Apply && a->name != "Y") ? SpaceW : SpaceV;
  // a bare vector is read in V
  Evaluator::Value v = ev.eval(a, out);
  Expansion e;
  e.space = &ev.space(out);
  if (v.iterate) {
    e.series = *v.iterate;
  } else if (!v.factors.empty()) {
    e.var = v.factors.front().var;
    e.series = chain(std::move(v.factors), v.base);
  } else {
    Vec c = v.base;
    e.series = make_series<Vec>(Support{}, [c](const Monomial& m) { return m == Monomial{} ? c : Vec{}; });
  }
  return e;
}

std::vector<std::string> expansion_terms(const Expansion& e, long half_width, int log_bound) {
  const Support& s = e.series->support();
  Window w;
  for (int v = 0; v < kMaxVars; ++v)
    if (s.mask & bit(v)) {
      w.mask |= bit(v);
      w.lo[v] = Exponent(-half_width);
      w.hi[v] = Exponent(half_width);
      w.log_bound[v] = log_bound;
    }
  std::vector<std::string> out;
  for (const Monomial& m : window_monomials(w, {&s})) {
    Vec c = e.series->coeff(m);
    for (auto& [id, sc] : c.entries()) out.push_back(term_str(sc, m, w.mask) + " " + e.space->name(id));
  }
  return out;
}

std::string decompose_report(const LoadedModel& lm, Exponent max_weight) {
  const Model& m = lm.model;
  JordanDecomposition J = jordan_decompose(*m.g, max_weight);
  std::ostringstream os;
  os << "model " << lm.id << ", automorphism " << m.desc.automorphism << "\n";
  os << "P_V = {";
  for (size_t i = 0; i < J.spectrum.size(); ++i) os << (i ? "," : "") << J.spectrum[i].str();
  os << "}\n";
  os << "N = " << (J.nilpotent_part_is_zero() ? "0" : "nonzero") << "\n";
  for (const JordanBlock& b : J.blocks) {
    if (b.basis.empty()) continue;
    os << "weight " << b.level.str() << " (dim " << b.basis.size() << "): nilpotency index " << b.nilpotency_index;
    os << ", alpha {";
    bool first = true;
    for (auto& [a, p] : b.projector) {
      os << (first ? "" : ",") << a.str();
      first = false;
    }
    os << "}\n";
    os << "  basis:";
    for (uint32_t id : b.basis) os << " " << m.V->name(id);
    os << "\n";
    if (b.two_pi_i_N.is_zero()) {
      os << "  2πi·N = 0\n";
    } else {
      os << "  2πi·N (column j is the image of basis vector j) =\n";
      std::istringstream rows(b.two_pi_i_N.str());
      for (std::string line; std::getline(rows, line);) os << "    " << line << "\n";
    }
  }
  return os.str();
}

}  // namespace twistvo
