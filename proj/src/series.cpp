#include "twistvo/series.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace twistvo {

namespace {
const char* kNames[kMaxVars] = {"x", "x0", "x1", "x2", "x3", "x4", "y", "t"};
}

const char* var_name(int v) { return (v >= 0 && v < kMaxVars) ? kNames[v] : "?"; }

int var_from_name(const std::string& s) {
  for (int i = 0; i < kMaxVars; ++i)
    if (s == kNames[i]) return i;
  return -1;
}

std::string Monomial::str(uint32_t mask) const {
  std::string out;
  for (int v = 0; v < kMaxVars; ++v) {
    if (!(mask & bit(v))) continue;
    if (e[v] != Exponent(0)) {
      if (!out.empty()) out += "·";
      out += var_name(v);
      if (e[v] != Exponent(1)) {
        if (e[v].is_integer())
          out += "^" + e[v].str();
        else
          out += "^{" + e[v].str() + "}";
      }
    }
    if (k[v] != 0) {
      if (!out.empty()) out += "·";
      out += std::string("log(") + var_name(v) + ")";
      if (k[v] != 1) out += "^" + std::to_string(k[v]);
    }
  }
  return out.empty() ? "1" : out;
}

bool Support::admits(const Monomial& m) const {
  Exponent tot;
  for (int i = 0; i < kMaxVars; ++i) {
    if (!(mask & bit(i))) {
      if (m.e[i] != Exponent(0) || m.k[i] != 0) return false;
      continue;
    }
    const VarSupport& s = v[i];
    Exponent e = m.e[i];
    if (m.k[i] > s.log_bound) return false;
    if (s.lo && e < *s.lo) return false;
    if (s.hi && e > *s.hi) return false;
    if (!s.cosets.empty()) {
      Exponent r = e.residue();
      if (std::find(s.cosets.begin(), s.cosets.end(), r) == s.cosets.end()) return false;
    }
    tot += e;
  }
  if (degree && tot != *degree) return false;
  return true;
}

namespace detail {

namespace {
VarSupport absent() { return VarSupport{Exponent(0), Exponent(0), {Exponent(0)}, 0}; }

void add_cosets(std::vector<Exponent>& into, const std::vector<Exponent>& from) {
  for (auto c : from)
    if (std::find(into.begin(), into.end(), c) == into.end()) into.push_back(c);
  std::sort(into.begin(), into.end());
}
}  // namespace

Support sum_support(const std::vector<const Support*>& parts) {
  Support r;
  if (parts.empty()) return r;
  for (auto* p : parts) r.mask |= p->mask;
  for (int i = 0; i < kMaxVars; ++i) {
    if (!(r.mask & bit(i))) continue;
    VarSupport acc;
    bool first = true, unknown = false;
    for (auto* p : parts) {
      VarSupport s = (p->mask & bit(i)) ? p->v[i] : absent();
      if (first) {
        acc = s;
        first = false;
        if (s.cosets.empty()) unknown = true;
        continue;
      }
      acc.lo = (acc.lo && s.lo) ? std::optional(std::min(*acc.lo, *s.lo)) : std::nullopt;
      acc.hi = (acc.hi && s.hi) ? std::optional(std::max(*acc.hi, *s.hi)) : std::nullopt;
      if (s.cosets.empty()) unknown = true;
      add_cosets(acc.cosets, s.cosets);
      acc.log_bound = std::max(acc.log_bound, s.log_bound);
    }
    if (unknown) acc.cosets.clear();
    r.v[i] = acc;
  }
  r.degree = parts[0]->degree;
  for (auto* p : parts)
    if (!p->degree || !r.degree || *p->degree != *r.degree) r.degree.reset();
  return r;
}

Support product_support(const Support& a, const Support& b) {
  Support r;
  r.mask = a.mask | b.mask;
  for (int i = 0; i < kMaxVars; ++i) {
    bool ia = a.mask & bit(i), ib = b.mask & bit(i);
    if (ia && !ib) r.v[i] = a.v[i];
    if (ib && !ia) r.v[i] = b.v[i];
    if (ia && ib) {
      const VarSupport &x = a.v[i], &y = b.v[i];
      VarSupport s;
      if (x.lo && y.lo) s.lo = *x.lo + *y.lo;
      if (x.hi && y.hi) s.hi = *x.hi + *y.hi;
      if (!x.cosets.empty() && !y.cosets.empty()) {
        for (auto p : x.cosets)
          for (auto q : y.cosets) add_cosets(s.cosets, {(p + q).residue()});
      }
      s.log_bound = x.log_bound + y.log_bound;
      r.v[i] = s;
    }
  }
  if (a.degree && b.degree) r.degree = *a.degree + *b.degree;
  return r;
}

namespace {
bool shared_bounded(const VarSupport& x, const VarSupport& y) { return (x.lo && y.lo) || (x.hi && y.hi) || x.bounded() || y.bounded(); }
}  // namespace

int product_plan(const Support& a, const Support& b) {
  uint32_t shared = a.mask & b.mask;
  std::vector<int> loose;
  for (int i = 0; i < kMaxVars; ++i) {
    if (!(shared & bit(i))) continue;
    if (shared_bounded(a.v[i], b.v[i])) {
      if (a.v[i].cosets.empty() && b.v[i].cosets.empty())
        throw InfiniteConvolution(std::string("no exponent coset known for ") + var_name(i));
    } else {
      loose.push_back(i);
    }
  }
  if (loose.empty()) return -1;
  if (loose.size() == 1 && (a.degree || b.degree)) return loose[0];
  throw InfiniteConvolution(std::string("convolution in ") + var_name(loose[0]) + " is not a finite sum");
}

void for_each_split(const Support& a, const Support& b, int solve_var, const Monomial& m,
                    const std::function<void(const Monomial&, const Monomial&)>& f) {
  Monomial ma, mb;
  uint32_t shared = a.mask & b.mask;
  std::vector<int> bounded_vars, shared_vars;
  for (int i = 0; i < kMaxVars; ++i) {
    bool ia = a.mask & bit(i), ib = b.mask & bit(i);
    if (ia && !ib) {
      ma.e[i] = m.e[i];
      ma.k[i] = m.k[i];
    } else if (ib && !ia) {
      mb.e[i] = m.e[i];
      mb.k[i] = m.k[i];
    } else if (shared & bit(i)) {
      shared_vars.push_back(i);
      if (i != solve_var) bounded_vars.push_back(i);
    }
  }

  std::function<void(size_t)> logs = [&](size_t idx) {
    if (idx == shared_vars.size()) {
      if (solve_var >= 0) {
        const int u = solve_var;
        if (a.degree) {
          Exponent s;
          for (int i = 0; i < kMaxVars; ++i)
            if ((a.mask & bit(i)) && i != u) s += ma.e[i];
          ma.e[u] = *a.degree - s;
          mb.e[u] = m.e[u] - ma.e[u];
        } else {
          Exponent s;
          for (int i = 0; i < kMaxVars; ++i)
            if ((b.mask & bit(i)) && i != u) s += mb.e[i];
          mb.e[u] = *b.degree - s;
          ma.e[u] = m.e[u] - mb.e[u];
        }
      }
      f(ma, mb);
      return;
    }
    int v = shared_vars[idx];
    int k = m.k[v];
    int ka_lo = std::max(0, k - b.v[v].log_bound), ka_hi = std::min(k, a.v[v].log_bound);
    for (int ka = ka_lo; ka <= ka_hi; ++ka) {
      ma.k[v] = uint8_t(ka);
      mb.k[v] = uint8_t(k - ka);
      logs(idx + 1);
    }
  };

  std::function<void(size_t)> exps = [&](size_t idx) {
    if (idx == bounded_vars.size()) {
      logs(0);
      return;
    }
    int v = bounded_vars[idx];
    const VarSupport &x = a.v[v], &y = b.v[v];
    Exponent mv = m.e[v];
    std::optional<Exponent> lo = x.lo, hi = x.hi;
    if (y.hi) lo = lo ? std::max(*lo, mv - *y.hi) : mv - *y.hi;
    if (y.lo) hi = hi ? std::min(*hi, mv - *y.lo) : mv - *y.lo;
    if (*lo > *hi) return;
    std::vector<Exponent> rs;
    if (!x.cosets.empty()) {
      for (auto r : x.cosets) {
        if (!y.cosets.empty() && std::find(y.cosets.begin(), y.cosets.end(), (mv - r).residue()) == y.cosets.end()) continue;
        rs.push_back(r);
      }
    } else {
      for (auto r : y.cosets) rs.push_back((mv - r).residue());
    }
    for (auto r : rs) {
      Exponent e = r + Exponent((*lo - r).ceil());
      for (; e <= *hi; e += Exponent(1)) {
        ma.e[v] = e;
        mb.e[v] = mv - e;
        exps(idx + 1);
      }
    }
  };
  exps(0);
}

}  // namespace detail

VSeries tensor(SSeries s, Vec v) {
  Support sup = s->support();
  return std::make_shared<MapNode<Scalar, Vec>>(std::move(s), sup, [v = std::move(v)](const Scalar& c) { return c * v; });
}

VSeries tensor_sum(const std::vector<std::pair<SSeries, Vec>>& parts) {
  LinCombNode<Vec>::Terms t;
  for (auto& [s, v] : parts)
    if (!v.is_zero()) t.push_back({Scalar::one(), tensor(s, v)});
  if (t.empty()) return zero_series<Vec>();
  return lincomb<Vec>(std::move(t));
}

SSeries pair_with(VSeries s, std::function<Scalar(const Vec&)> functional, std::optional<Exponent> degree) {
  Support sup = s->support();
  if (degree) sup.degree = degree;
  return std::make_shared<MapNode<Vec, Scalar>>(std::move(s), sup, std::move(functional));
}

VSeries apply_map(VSeries s, LinearMap f) {
  Support sup = s->support();
  sup.degree.reset();
  return std::make_shared<MapNode<Vec, Vec>>(std::move(s), sup, std::move(f));
}

Window Window::box(std::initializer_list<int> vars, Exponent lo, Exponent hi, int log_bound) {
  Window w;
  for (int v : vars) {
    w.mask |= bit(v);
    w.lo[v] = lo;
    w.hi[v] = hi;
    w.log_bound[v] = log_bound;
  }
  return w;
}

std::string Window::str() const {
  std::ostringstream os;
  bool first = true;
  for (int v = 0; v < kMaxVars; ++v) {
    if (!(mask & bit(v))) continue;
    if (!first) os << ", ";
    first = false;
    os << var_name(v) << "∈[" << lo[v].str() << "," << hi[v].str() << "]";
    if (log_bound[v]) os << " log≤" << log_bound[v];
  }
  return os.str();
}

std::vector<Monomial> window_monomials(const Window& w, const std::vector<const Support*>& sups) {
  std::vector<int> vars;
  std::vector<std::vector<Exponent>> values;
  std::vector<int> logb;
  for (int v = 0; v < kMaxVars; ++v) {
    if (!(w.mask & bit(v))) continue;
    std::set<Exponent> cos;
    int lb = 0;
    for (auto* s : sups) {
      if (!(s->mask & bit(v))) {
        cos.insert(Exponent(0));
        continue;
      }
      if (s->v[v].cosets.empty()) throw EngineError(std::string("window enumeration needs exponent cosets for ") + var_name(v));
      for (auto c : s->v[v].cosets) cos.insert(c);
      lb = std::max(lb, s->v[v].log_bound);
    }
    std::vector<Exponent> vals;
    for (auto r : cos)
      for (Exponent e = r + Exponent((w.lo[v] - r).ceil()); e <= w.hi[v]; e += Exponent(1)) vals.push_back(e);
    std::sort(vals.begin(), vals.end());
    vars.push_back(v);
    values.push_back(std::move(vals));
    logb.push_back(std::min(lb, w.log_bound[v]));
  }
  std::vector<Monomial> out;
  Monomial m;
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == vars.size()) {
      out.push_back(m);
      return;
    }
    for (auto e : values[i]) {
      m.e[vars[i]] = e;
      for (int k = 0; k <= logb[i]; ++k) {
        m.k[vars[i]] = uint8_t(k);
        rec(i + 1);
      }
    }
    m.e[vars[i]] = Exponent(0);
    m.k[vars[i]] = 0;
  };
  rec(0);
  return out;
}

std::string term_str(const Scalar& c, const Monomial& m, uint32_t mask) {
  std::string mono = m.str(mask);
  std::string cs = c.str();
  bool compound = cs.find(" + ") != std::string::npos || cs.find(" - ") != std::string::npos;
  if (mono == "1") return compound ? "(" + cs + ")" : cs;
  if (cs == "1") return mono;
  if (cs == "-1") return "-" + mono;
  if (compound) cs = "(" + cs + ")";
  return cs + "·" + mono;
}

std::string format_series(const SSeries& s, const Window& w) {
  std::string out;
  for (const Monomial& m : window_monomials(w, {&s->support()})) {
    Scalar c = s->coeff(m);
    if (c.is_zero()) continue;
    std::string t = term_str(c, m, w.mask | s->support().mask);
    if (out.empty())
      out = t;
    else if (t[0] == '-')
      out += " - " + t.substr(1);
    else
      out += " + " + t;
  }
  return out.empty() ? "0" : out;
}

}  // namespace twistvo
