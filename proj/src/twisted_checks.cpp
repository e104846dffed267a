#include "twistvo/twisted_checks.hpp"

#include <algorithm>

#include "twistvo/calculus.hpp"
#include "twistvo/fields.hpp"
#include "twistvo/vosa.hpp"

namespace twistvo {

namespace {

int parity_of(const FockSpace& F, const Vec& v) {
  if (v.is_zero()) return 0;
  int p = F.parity_of(v);
  if (p < 0) throw EngineError("vector is not parity-homogeneous");
  return p;
}

std::string inputs(const TwistedModule& M, std::initializer_list<std::pair<const char*, const Vec*>> vs) {
  std::string s = M.name() + ":";
  for (auto& [n, v] : vs) {
    s += std::string(" ") + n + "=";
    s += (std::string(n) == "w") ? vec_str(M.W(), *v) : vec_str(M.V(), *v);
  }
  return s;
}

int logs(const TwistedModule& M) { return M.semisimple() ? 0 : M.log_bound(); }

Window box(std::initializer_list<int> vars, long hw, int log_bound = 0) {
  return Window::box(vars, Exponent(-hw), Exponent(hw), log_bound);
}

Scalar inv_factorial(long k) { return Scalar(Q(1) / factorial(k)); }

// x1^{-1}d((x2+x0)/x1) Y(Y_V(((x2+x0)/x1)^{L_g}u, x0)v, x2)w
VSeries jacobi_rhs(const TwistedModule& M, const Vec& u, const Vec& v, const Vec& w) {
  Exponent alpha = M.alpha_of(u);
  SSeries d = delta_sum(X1, X2, X0, alpha);
  if (M.semisimple()) return mul<Vec>(d, module_iterate(M, u, X0, v, X2, w));
  SSeries L = sub<Scalar>(log_sum(X2, X0), log_var(X1));
  std::vector<Vec> orbit = nilpotent_orbit([&M](const Vec& x) { return M.N_V(x); }, u, M.log_bound());
  typename LinCombNode<Vec>::Terms terms;
  for (size_t k = 0; k < orbit.size(); ++k) {
    if (orbit[k].is_zero()) continue;
    SSeries kern = k == 0 ? d : mul<Scalar>(d, power(L, int(k)));
    terms.push_back({inv_factorial(long(k)), mul<Vec>(kern, module_iterate(M, orbit[k], X0, v, X2, w))});
  }
  if (terms.empty()) return zero_series<Vec>();
  return lincomb<Vec>(std::move(terms));
}

VSeries product12(const TwistedModule& M, const Vec& u, const Vec& v, const Vec& w) {
  return chain({module_factor(M, u, X1), module_factor(M, v, X2)}, w);
}

VSeries product21(const TwistedModule& M, const Vec& u, const Vec& v, const Vec& w) {
  return chain({module_factor(M, v, X2), module_factor(M, u, X1)}, w);
}

long weak_order(const TwistedModule& M, const Vec& u, const Vec& v) { return weak_commutativity_order(M.YV(), u, v); }

}  // namespace

CheckResult check_twisted_jacobi(const TwistedModule& M, const Vec& u, const Vec& v, const Vec& w, long half_width) {
  int eps = (parity_of(M.V(), u) & parity_of(M.V(), v)) ? -1 : 1;
  VSeries lhs = sub<Vec>(mul<Vec>(delta_diff(X0, X1, X2), product12(M, u, v, w)),
                         scale<Vec>(Scalar(long(eps)), mul<Vec>(delta_diff_minus(X0, X1, X2), product21(M, u, v, w))));
  return compare_series("twisted-jacobi", inputs(M, {{"u", &u}, {"v", &v}, {"w", &w}}), lhs, jacobi_rhs(M, u, v, w),
                        box({X0, X1, X2}, half_width, logs(M)), M.W());
}

CheckResult check_twisted_weak_commutativity(const TwistedModule& M, const Vec& u, const Vec& v, const Vec& w,
                                             long half_width) {
  int eps = (parity_of(M.V(), u) & parity_of(M.V(), v)) ? -1 : 1;
  Exponent m(std::max(weak_order(M, u, v), 1L));
  VSeries lhs = mul<Vec>(binomial_expand(m, X1, X2), product12(M, u, v, w));
  VSeries rhs = scale<Vec>(Scalar(long(eps)), mul<Vec>(minus_convention(m, X1, X2), product21(M, u, v, w)));
  return compare_series("twisted-weak-commutativity", inputs(M, {{"u", &u}, {"v", &v}, {"w", &w}}), lhs, rhs,
                        box({X1, X2}, half_width, logs(M)), M.W());
}

CheckResult check_commutator_formula(const TwistedModule& M, const Vec& u, const Vec& v, const Vec& w, long half_width) {
  int eps = (parity_of(M.V(), u) & parity_of(M.V(), v)) ? -1 : 1;
  VSeries lhs = sub<Vec>(product12(M, u, v, w), scale<Vec>(Scalar(long(eps)), product21(M, u, v, w)));
  VSeries rhs = residue<Vec>(jacobi_rhs(M, u, v, w), X0);
  return compare_series("commutator-formula", inputs(M, {{"u", &u}, {"v", &v}, {"w", &w}}), lhs, rhs,
                        box({X1, X2}, half_width, logs(M)), M.W());
}

CheckResult check_equivariance(const TwistedModule& M, const Vec& u, const Vec& w, long half_width) {
  const auto& g = M.parts().g_V;
  if (!g) throw EngineError("module has no automorphism on V");
  VSeries lhs = branch_shift<Vec>(M.field(g->apply(u), w, X), X, 1);
  return compare_series("equivariance", inputs(M, {{"u", &u}, {"w", &w}}), lhs, M.field(u, w, X),
                        box({X}, half_width, logs(M)), M.W());
}

CheckResult check_g_compatibility(const TwistedModule& M, const Vec& u, const Vec& w, long half_width) {
  const auto& gV = M.parts().g_V;
  const auto& gW = M.parts().g_W;
  if (!gV || !gW) throw EngineError("module has no automorphism action");
  VSeries lhs = apply_map(M.field(u, w, X), [gW](const Vec& x) { return gW->apply(x); });
  VSeries rhs = M.field(gV->apply(u), gW->apply(w), X);
  return compare_series("g-compatibility", inputs(M, {{"u", &u}, {"w", &w}}), lhs, rhs, box({X}, half_width, logs(M)),
                        M.W());
}

CheckResult check_L_minus1_derivative_W(const TwistedModule& M, const Vec& u, const Vec& w, long half_width) {
  std::string in = inputs(M, {{"u", &u}, {"w", &w}});
  Window win = box({X}, half_width, logs(M));
  VSeries d = derivative<Vec>(M.field(u, w, X), X);
  Vec Lu = M.L_V(-1, u);
  if (auto r = compare_series("L(-1)-derivative", in, d, M.field(Lu, w, X), win, M.W())) return r;
  VSeries comm = sub<Vec>(apply_map(M.field(u, w, X), [&M](const Vec& x) { return M.L_W(-1, x); }),
                          M.field(u, M.L_W(-1, w), X));
  return compare_series("L(-1)-commutator", in, d, comm, win, M.W());
}

VSeries y0_part(const TwistedModule& M, const Vec& u, const Vec& w, int var) {
  VSeries full = M.field(u, w, var);
  Support s = full->support();
  s.v[var].log_bound = 0;
  return make_series<Vec>(s, [full, var](const Monomial& m) {
    if (m.k[var] != 0) return Vec{};
    return full->coeff(m);
  });
}

CheckResult check_y0_decomposition(const TwistedModule& M, const Vec& u, const Vec& w, long half_width) {
  std::string in = inputs(M, {{"u", &u}, {"w", &w}});
  int bound = logs(M);
  Window win = box({X}, half_width, bound);
  VSeries full = M.field(u, w, X);
  LinearMap NV = [&M](const Vec& x) { return M.N_V(x); };
  LinearMap NW = [&M](const Vec& x) { return M.N_W(x); };

  // Y_0(x^{-N}u, x)w
  typename LinCombNode<Vec>::Terms b;
  std::vector<Vec> ou = nilpotent_orbit(NV, u, bound);
  for (size_t k = 0; k < ou.size(); ++k) {
    if (ou[k].is_zero()) continue;
    Scalar c = inv_factorial(long(k)) * Scalar(long(k % 2 ? -1 : 1));
    b.push_back({c, mul<Vec>(power(log_var(X), int(k)), y0_part(M, ou[k], w, X))});
  }
  VSeries rb = b.empty() ? zero_series<Vec>() : lincomb<Vec>(std::move(b));
  if (auto r = compare_series("y0-decomposition", in, full, rb, win, M.W())) return r;

  // x^{-N} Y_0(u,x) x^{N} w
  typename LinCombNode<Vec>::Terms c;
  std::vector<Vec> ow = nilpotent_orbit(NW, w, bound);
  for (size_t m = 0; m < ow.size(); ++m) {
    if (ow[m].is_zero()) continue;
    VSeries inner = y0_part(M, u, ow[m], X);
    for (int l = 0; l <= bound; ++l) {
      int n = l;
      LinearMap Nl = [NW, n](const Vec& x) {
        Vec r = x;
        for (int i = 0; i < n; ++i) r = NW(r);
        return r;
      };
      Scalar k = inv_factorial(l) * inv_factorial(long(m)) * Scalar(long(l % 2 ? -1 : 1));
      c.push_back({k, mul<Vec>(power(log_var(X), l + int(m)), apply_map(inner, Nl))});
    }
  }
  VSeries rc = c.empty() ? zero_series<Vec>() : lincomb<Vec>(std::move(c));
  return compare_series("y0-conjugation", in, full, rc, win, M.W());
}

namespace {

constexpr int kProductVars[] = {X1, X2, X3, X4};

void require_product_size(size_t k) {
  if (k == 0 || k > 4) throw EngineError("products of 1 to 4 fields are supported");
}

SSeries product_prefactor(const TwistedModule& M, const std::vector<Vec>& vs) {
  SSeries pre = constant(Scalar::one());
  bool first = true;
  auto times = [&](SSeries s) {
    pre = first ? s : mul<Scalar>(pre, s);
    first = false;
  };
  for (size_t i = 0; i < vs.size(); ++i) {
    Exponent a = M.alpha_of(vs[i]);
    if (a != Exponent(0)) times(monomial({{kProductVars[i], a}}));
  }
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j) {
      long m = weak_order(M, vs[i], vs[j]);
      if (m > 0) times(binomial_expand(Exponent(m), kProductVars[i], kProductVars[j]));
    }
  return pre;
}

VSeries ordered_chain(const TwistedModule& M, const std::vector<Vec>& vs, const std::vector<int>& order, const Vec& w) {
  std::vector<Factor> f;
  for (int i : order) f.push_back(module_factor(M, vs[i], kProductVars[i]));
  return chain(std::move(f), w);
}

std::vector<int> identity_order(size_t k) {
  std::vector<int> o(k);
  for (size_t i = 0; i < k; ++i) o[i] = int(i);
  return o;
}

}  // namespace

VSeries prefactored_product(const TwistedModule& M, const std::vector<Vec>& vs, const Vec& w) {
  require_product_size(vs.size());
  return mul<Vec>(product_prefactor(M, vs), ordered_chain(M, vs, identity_order(vs.size()), w));
}

CheckResult check_product_polynomiality(const TwistedModule& M, const std::vector<Vec>& vs, const Vec& w, long half_width) {
  require_product_size(vs.size());
  if (!M.semisimple()) throw EngineError("polynomiality is checked on log-free modules");
  const size_t k = vs.size();
  VSeries F = prefactored_product(M, vs, w);
  std::vector<Exponent> lo(k), base(k);
  Exponent lw = M.level_W(w);
  for (size_t i = 0; i < k; ++i) {
    Exponent a = M.alpha_of(vs[i]), wt = M.weight_V(vs[i]);
    Exponent ms;
    for (size_t j = 0; j < k; ++j)
      if (j != i) ms += Exponent(weak_order(M, i < j ? vs[i] : vs[j], i < j ? vs[j] : vs[i]));
    lo[i] = a - wt - lw;
    base[i] = a - wt + ms;  // hi = output level + base
  }
  Window win;
  for (size_t i = 0; i < k; ++i) {
    int x = kProductVars[i];
    win.mask |= bit(x);
    win.lo[x] = Exponent(-half_width);
    win.hi[x] = Exponent(half_width);
  }
  std::string in = M.name() + ":";
  for (size_t i = 0; i < k; ++i) in += " v" + std::to_string(i + 1) + "=" + vec_str(M.V(), vs[i]);
  in += " w=" + vec_str(M.W(), w);
  for (const Monomial& m : window_monomials(win, {&F->support()})) {
    Vec c = F->coeff(m);
    for (auto& [id, coef] : c.entries()) {
      Exponent lev = M.W().level(id);
      for (size_t i = 0; i < k; ++i) {
        Exponent e = m.e[kProductVars[i]];
        if (e < lo[i] || e > lev + base[i]) {
          std::string why = std::string("exponent of ") + var_name(kProductVars[i]) + " outside [" + lo[i].str() + ", " +
                            (lev + base[i]).str() + "]";
          return CheckFailure{"product-polynomiality", in + " at " + m.str(win.mask) + ": " + why + ", coefficient " +
                                                           vec_str(M.W(), c)};
        }
      }
    }
  }
  return std::nullopt;
}

int koszul_sign(const std::vector<int>& parities, const std::vector<int>& perm) {
  int s = 1;
  for (size_t a = 0; a < perm.size(); ++a)
    for (size_t b = a + 1; b < perm.size(); ++b)
      if (perm[a] > perm[b] && parities[perm[a]] && parities[perm[b]]) s = -s;
  return s;
}

CheckResult check_permutation_symmetry(const TwistedModule& M, const std::vector<Vec>& vs, const Vec& w,
                                       const std::vector<int>& perm, long half_width) {
  require_product_size(vs.size());
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != identity_order(vs.size())) throw EngineError("not a permutation");
  std::vector<int> par;
  for (auto& v : vs) par.push_back(parity_of(M.V(), v));
  SSeries pre = product_prefactor(M, vs);
  VSeries lhs = mul<Vec>(pre, ordered_chain(M, vs, identity_order(vs.size()), w));
  VSeries rhs = scale<Vec>(Scalar(long(koszul_sign(par, perm))), mul<Vec>(pre, ordered_chain(M, vs, perm, w)));
  Window win;
  for (size_t i = 0; i < vs.size(); ++i) {
    int x = kProductVars[i];
    win.mask |= bit(x);
    win.lo[x] = Exponent(-half_width);
    win.hi[x] = Exponent(half_width);
  }
  std::string in = M.name() + ": perm=";
  for (int p : perm) in += std::to_string(p + 1);
  for (size_t i = 0; i < vs.size(); ++i) in += " v" + std::to_string(i + 1) + "=" + vec_str(M.V(), vs[i]);
  in += " w=" + vec_str(M.W(), w);
  return compare_series("permutation-symmetry", in, lhs, rhs, win, M.W());
}

}  // namespace twistvo
