#include "twistvo/fields.hpp"

namespace twistvo {

namespace {

class ChainNode final : public Node<Vec> {
 public:
  ChainNode(std::vector<Factor> f, Vec w) : Node<Vec>(make_sup(f, w)), f_(std::move(f)), w_(std::move(w)) {}

 protected:
  Vec compute(const Monomial& m) const override {
    Vec r = w_;
    for (size_t i = f_.size(); i-- > 0;) {
      const Factor& f = f_[i];
      r = f.act(m.e[f.var], m.k[f.var], r);
      if (r.is_zero()) break;
    }
    return r;
  }

 private:
  static Support make_sup(const std::vector<Factor>& f, const Vec& w) {
    Support s;
    for (size_t i = 0; i < f.size(); ++i) {
      if (s.mask & bit(f[i].var)) throw EngineError("chain uses a variable twice");
      VarSupport vs = f[i].support;
      vs.lo.reset();
      if (i + 1 == f.size() && f[i].lowest) vs.lo = f[i].lowest(w);
      s.with(f[i].var, vs);
    }
    return s;
  }
  std::vector<Factor> f_;
  Vec w_;
};

}  // namespace

VSeries chain(std::vector<Factor> factors, const Vec& w) { return std::make_shared<ChainNode>(std::move(factors), w); }

Factor module_factor(const TwistedModule& M, const Vec& u, int var) {
  Factor f;
  f.var = var;
  f.support = VarSupport::coset(M.exponent_coset(u));
  f.support.log_bound = M.semisimple() ? 0 : M.log_bound();
  f.act = [&M, u](Exponent e, int k, const Vec& in) { return M.coeff(u, e, k, in); };
  f.lowest = [&M, u](const Vec& in) -> std::optional<Exponent> { return M.lowest_exponent(u, in); };
  return f;
}

Factor algebra_factor(const VertexEngine& YV, const Vec& u, int var) {
  Factor f;
  f.var = var;
  f.support = VarSupport::integral();
  f.act = [&YV, u](Exponent e, int k, const Vec& in) { return k == 0 ? YV.coeff(u, e, in) : Vec{}; };
  f.lowest = [&YV, u](const Vec& in) -> std::optional<Exponent> {
    Exponent hu, hv;
    for (auto& [i, c] : u.entries()) hu = std::max(hu, YV.algebra().level(i));
    for (auto& [i, c] : in.entries()) hv = std::max(hv, YV.module().level(i));
    return -(hu + hv);
  };
  return f;
}

SSeries pair(const VSeries& s, const Vec& dual) {
  return pair_with(s, [dual](const Vec& v) {
    Scalar acc;
    for (auto& [i, c] : dual.entries()) {
      Scalar x = v.at(i);
      if (!x.is_zero()) acc += c * x;
    }
    return acc;
  });
}

VSeries module_iterate(const TwistedModule& M, const Vec& u, int x0, const Vec& v, int x2, const Vec& w) {
  Support s;
  VarSupport s0 = VarSupport::integral();
  Exponent hu, hv;
  for (auto& [i, c] : u.entries()) hu = std::max(hu, M.V().level(i));
  for (auto& [i, c] : v.entries()) hv = std::max(hv, M.V().level(i));
  s0.lo = -(hu + hv);
  VarSupport s2 = VarSupport::coset(-(M.alpha_of(u) + M.alpha_of(v)));
  s2.log_bound = M.semisimple() ? 0 : M.log_bound();
  s.with(x0, s0).with(x2, s2);
  return make_series<Vec>(s, [&M, u, v, w, x0, x2](const Monomial& m) {
    if (m.k[x0] != 0) return Vec{};
    Vec t = M.coeff_V(u, m.e[x0], v);
    if (t.is_zero()) return t;
    return M.coeff(t, m.e[x2], m.k[x2], w);
  });
}

VSeries shifted_apply(const TwistedModule& M, const Vec& u, long shift, int x0, int x2, const VSeries& T) {
  if (!M.semisimple()) throw EngineError("shifted field needs a log-free module");
  const Support& ts = T->support();
  if (!(ts.mask & bit(x2)) || !ts.v[x2].lo) throw EngineError("shifted field needs a lower-bounded inner series");
  if (ts.mask & bit(x0)) throw EngineError("inner series already uses the shift variable");
  Support s = ts;
  s.degree.reset();
  s.with(x0, VarSupport::coset(M.exponent_coset(u)));
  Exponent lo = *ts.v[x2].lo;
  Q sh(shift);
  return make_series<Vec>(s, [&M, u, sh, x0, x2, T, lo](const Monomial& m) {
    // (x0+x2)^{shift+e} = sum_j C(shift+e, j) x0^{shift+e-j} x2^j, so e = a - shift + j
    Vec acc;
    if (m.k[x0] != 0) return acc;
    Exponent b = m.e[x2];
    for (long j = 0; b - Exponent(j) >= lo; ++j) {
      Monomial src = m;
      src.e[x0] = Exponent(0);
      src.e[x2] = b - Exponent(j);
      Vec t = T->coeff(src);
      if (t.is_zero()) continue;
      Exponent e = m.e[x0] - Exponent(Q(sh)) + Exponent(j);
      Q c = binom(sh + e.to_q(), j);
      if (c == 0) continue;
      Vec y = M.coeff(u, e, 0, t);
      y *= Scalar(c);
      acc += y;
    }
    return acc;
  });
}

}  // namespace twistvo
