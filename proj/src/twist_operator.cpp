#include "twistvo/twist_operator.hpp"

#include <algorithm>
#include <mutex>

#include "twistvo/calculus.hpp"
#include "twistvo/vosa.hpp"

namespace twistvo {

namespace {

int parity_in(const FockSpace& F, const Vec& v) {
  if (v.is_zero()) return 0;
  int p = F.parity_of(v);
  if (p < 0) throw EngineError("vector is not parity-homogeneous");
  return p;
}

Exponent max_level(const FockSpace& F, const Vec& v) {
  Exponent h;
  for (auto& [i, c] : v.entries()) h = std::max(h, F.level(i));
  return h;
}

void require_log_free(const TwistedModule& M, const char* what) {
  if (!M.semisimple()) throw EngineError(std::string(what) + " is checked on log-free modules only");
}

Window box(std::initializer_list<int> vars, long hw, int log_bound = 0) {
  return Window::box(vars, Exponent(-hw), Exponent(hw), log_bound);
}

}  // namespace

Vec TwistOperator::substituted(uint32_t v, Exponent e, int k, uint32_t w) const {
  // Y(v,y)w = sum c_{e,i} y^e (log y)^i, log y = log x + Pi, so the
  // (log x)^k part is sum_{i>=k} C(i,k) Pi^{i-k} c_{e,i}
  const EngineFaults& f = M_.faults();
  int bound = M_.semisimple() ? 0 : M_.log_bound();
  Vec vv = Vec::basis(v), ww = Vec::basis(w);
  Vec acc;
  for (int i = k; i <= bound; ++i) {
    Vec c = M_.coeff(vv, e, i, ww);
    if (c.is_zero()) continue;
    Scalar s(binom(Q(i), i - k));
    if (i > k) s *= Scalar::pi_pow(i - k) * Scalar(long(f.twist_conjugate_branch && (i - k) % 2 ? -1 : 1));
    c *= s;
    acc += c;
  }
  if (acc.is_zero()) return acc;
  acc *= Scalar::expi(f.twist_conjugate_branch ? -e : e);
  return acc;
}

Vec TwistOperator::basis_coeff(uint32_t w, Exponent e, int k, uint32_t v) const {
  Key key{w, v, e.raw(), k};
  {
    std::shared_lock lk(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  const EngineFaults& f = M_.faults();
  Vec vv = Vec::basis(v), ww = Vec::basis(w);
  Exponent lo = M_.lowest_exponent(vv, ww);
  long J = (e - lo).floor();
  Vec acc;
  // Horner: sum_j L(-1)^j/j! S_{e-j} = S_e + L(S_{e-1} + L(S_{e-2} + ...)/2)
  for (long j = J; j >= 0; --j) {
    if (!acc.is_zero()) {
      acc = M_.L_W(-1, acc);
      acc *= Scalar(Q(f.twist_negative_translation ? -1 : 1, j + 1));
    }
    acc += substituted(v, e - Exponent(j), k, w);
  }
  if (!f.drop_twist_sign && (M_.V().parity(v) & M_.W().parity(w))) acc *= Scalar(-1L);
  std::unique_lock lk(mu_);
  memo_.emplace(key, acc);
  return acc;
}

Vec TwistOperator::coeff(const Vec& w, Exponent e, int k, const Vec& v) const {
  Vec out;
  for (auto& [i, ci] : w.entries())
    for (auto& [j, cj] : v.entries()) {
      Vec t = basis_coeff(i, e, k, j);
      if (t.is_zero()) continue;
      t *= ci * cj;
      out += t;
    }
  return out;
}

VSeries TwistOperator::field(const Vec& w, const Vec& v, int var) const {
  return chain({twist_factor(*this, w, var, M_.alpha_of(v))}, v);
}

long TwistOperator::commutativity_order(const Vec& u, const Vec& w) const {
  Exponent a = M_.alpha_of(u);
  Exponent lo = M_.lowest_exponent(u, w);
  // first exponent of the coset -a + Z at or above lo
  Exponent e = lo + (-a - lo).residue();
  for (; e < -a; e += Exponent(1))
    if (!M_.coeff(u, e, 0, w).is_zero()) return (-a - e).to_long();
  return 0;
}

VSeries TwistOperator::twist_iterate(const Vec& u, int x0, const Vec& w, int x2, const Vec& v) const {
  Support s;
  VarSupport s0 = VarSupport::coset(M_.exponent_coset(u));
  s0.lo = M_.lowest_exponent(u, w);
  int logs = M_.semisimple() ? 0 : M_.log_bound();
  s0.log_bound = logs;
  VarSupport s2 = VarSupport::coset(M_.exponent_coset(v));
  s2.log_bound = logs;
  s.with(x0, s0).with(x2, s2);
  return make_series<Vec>(s, [this, u, w, v, x0, x2](const Monomial& m) {
    Vec t = M_.coeff(u, m.e[x0], m.k[x0], w);
    if (t.is_zero()) return t;
    return coeff(t, m.e[x2], m.k[x2], v);
  });
}

Factor twist_factor(const TwistOperator& T, const Vec& w, int var, Exponent input_alpha) {
  const TwistedModule& M = T.module();
  Factor f;
  f.var = var;
  f.support = VarSupport::coset((-input_alpha).residue());
  f.support.log_bound = M.semisimple() ? 0 : M.log_bound();
  f.act = [&T, w](Exponent e, int k, const Vec& in) { return T.coeff(w, e, k, in); };
  f.lowest = [&M, w](const Vec& in) -> std::optional<Exponent> {
    return -(max_level(M.V(), in) + max_level(M.W(), w));
  };
  return f;
}

namespace {

std::string inputs(const TwistOperator& T, std::initializer_list<std::pair<const char*, const Vec*>> vs) {
  const TwistedModule& M = T.module();
  std::string s = M.name() + ":";
  for (auto& [n, v] : vs) {
    s += std::string(" ") + n + "=";
    s += (std::string(n) == "w") ? vec_str(M.W(), *v) : vec_str(M.V(), *v);
  }
  return s;
}

// e^{x L(-1)} w as a series in var
VSeries translation(const TwistedModule& M, const Vec& w, int var) {
  Support s;
  VarSupport vs = VarSupport::integral();
  vs.lo = Exponent(0);
  s.with(var, vs);
  return make_series<Vec>(s, [&M, w, var](const Monomial& m) {
    if (m.k[var] != 0 || m.e[var] < Exponent(0)) return Vec{};
    long n = m.e[var].to_long();
    Vec r = w;
    for (long j = 1; j <= n && !r.is_zero(); ++j) {
      r = M.L_W(-1, r);
      r *= Scalar(Q(1, j));
    }
    return r;
  });
}

int sign_uw(const TwistedModule& M, const Vec& u, const Vec& w) {
  return (parity_in(M.V(), u) & parity_in(M.W(), w)) ? -1 : 1;
}

}  // namespace

CheckResult check_twist_vacuum(const TwistOperator& T, const Vec& w, long half_width) {
  const TwistedModule& M = T.module();
  Vec vac = Vec::basis(M.V().vacuum());
  return compare_series("twist-vacuum", inputs(T, {{"w", &w}}), T.field(w, vac, X), translation(M, w, X),
                        box({X}, half_width), M.W());
}

CheckResult check_weak_associativity(const TwistOperator& T, const Vec& u, const Vec& v, const Vec& w, long half_width) {
  const TwistedModule& M = T.module();
  require_log_free(M, "weak associativity");
  long m = weak_commutativity_order(M.YV(), u, v);
  VSeries lhs = shifted_apply(M, u, m, X0, X2, T.field(w, v, X2));
  VSeries rhs = mul<Vec>(binomial_sum(Exponent(m), X0, X2), T.twist_iterate(u, X0, w, X2, v));
  return compare_series("weak-associativity", inputs(T, {{"u", &u}, {"v", &v}, {"w", &w}}), lhs, rhs,
                        box({X0, X2}, half_width), M.W());
}

namespace {

// Y(u,x1) Ytw(w,x2) v
VSeries twisted_then_twist(const TwistOperator& T, const Vec& u, const Vec& v, const Vec& w) {
  const TwistedModule& M = T.module();
  return chain({module_factor(M, u, X1), twist_factor(T, w, X2, M.alpha_of(v))}, v);
}

// Ytw(w,x2) Y_V(u,x1) v
VSeries twist_then_algebra(const TwistOperator& T, const Vec& u, const Vec& v, const Vec& w) {
  const TwistedModule& M = T.module();
  return chain({twist_factor(T, w, X2, M.alpha_of(u) + M.alpha_of(v)), algebra_factor(M, u, X1)}, v);
}

}  // namespace

CheckResult check_twist_jacobi(const TwistOperator& T, const Vec& u, const Vec& v, const Vec& w, long half_width) {
  const TwistedModule& M = T.module();
  require_log_free(M, "twist Jacobi identity");
  Exponent a = M.alpha_of(u);
  int eps = sign_uw(M, u, w);
  VSeries lhs = sub<Vec>(mul<Vec>(delta_diff(X0, X1, X2, a), twisted_then_twist(T, u, v, w)),
                         scale<Vec>(Scalar(long(eps)), mul<Vec>(delta_diff_minus(X0, X1, X2, a), twist_then_algebra(T, u, v, w))));
  VSeries rhs = mul<Vec>(delta_sum(X1, X2, X0), T.twist_iterate(u, X0, w, X2, v));
  return compare_series("twist-jacobi", inputs(T, {{"u", &u}, {"v", &v}, {"w", &w}}), lhs, rhs,
                        box({X0, X1, X2}, half_width), M.W());
}

CheckResult check_gen_commutator(const TwistOperator& T, const Vec& u, const Vec& v, const Vec& w, long half_width) {
  const TwistedModule& M = T.module();
  require_log_free(M, "generalized commutator formula");
  Exponent a = M.alpha_of(u);
  int eps = sign_uw(M, u, w);
  std::string in = inputs(T, {{"u", &u}, {"v", &v}, {"w", &w}});
  Window win = box({X1, X2}, half_width);
  VSeries lhs = sub<Vec>(mul<Vec>(binomial_expand(a, X1, X2), twisted_then_twist(T, u, v, w)),
                         scale<Vec>(Scalar(long(eps)), mul<Vec>(minus_convention(a, X1, X2), twist_then_algebra(T, u, v, w))));

  VSeries res = residue<Vec>(
      mul<Vec>(delta_sum(X1, X2, X0), mul<Vec>(monomial({{X0, a}}), T.twist_iterate(u, X0, w, X2, v))), X0);
  if (auto r = compare_series("gen-commutator", in, lhs, res, win, M.W())) return r;

  // sum_{k < M_{u,w}} 1/k! x1^{-1} d^k/dx2^k d(x2/x1) Ytw(u_{a+k}w, x2)v
  long m = T.commutativity_order(u, w);
  typename LinCombNode<Vec>::Terms terms;
  SSeries kern = delta_ratio(X1, X2);
  for (long k = 0; k < m; ++k) {
    if (k > 0) kern = derivative<Scalar>(kern, X2);
    Vec uk = M.coeff(u, -a - Exponent(k + 1), 0, w);
    if (uk.is_zero()) continue;
    terms.push_back({Scalar(Q(1) / factorial(k)), mul<Vec>(kern, T.field(uk, v, X2))});
  }
  VSeries finite = terms.empty() ? zero_series<Vec>() : lincomb<Vec>(std::move(terms));
  return compare_series("gen-commutator-finite", in, lhs, finite, win, M.W());
}

CheckResult check_gen_weak_commutativity(const TwistOperator& T, const Vec& u, const Vec& v, const Vec& w,
                                         long half_width) {
  const TwistedModule& M = T.module();
  require_log_free(M, "generalized weak commutativity");
  Exponent a = M.alpha_of(u);
  int eps = sign_uw(M, u, w);
  Exponent m(std::max(T.commutativity_order(u, w), 1L));
  std::string in = inputs(T, {{"u", &u}, {"v", &v}, {"w", &w}});
  Window win = box({X1, X2}, half_width);
  VSeries p1 = twisted_then_twist(T, u, v, w), p2 = twist_then_algebra(T, u, v, w);

  // (x1-x2)^M applied after (x1-x2)^{L_g}
  SSeries poly = binomial_expand(m, X1, X2);
  VSeries lhs = mul<Vec>(poly, mul<Vec>(binomial_expand(a, X1, X2), p1));
  VSeries rhs = scale<Vec>(Scalar(long(eps)), mul<Vec>(poly, mul<Vec>(minus_convention(a, X1, X2), p2)));
  if (auto r = compare_series("gen-weak-commutativity", in, lhs, rhs, win, M.W())) return r;

  VSeries lhs4 = mul<Vec>(binomial_expand(a + m, X1, X2), p1);
  VSeries rhs4 = scale<Vec>(Scalar(long(eps)), mul<Vec>(minus_convention(a + m, X1, X2), p2));
  return compare_series("gen-weak-commutativity-combined", in, lhs4, rhs4, win, M.W());
}

CheckResult check_twist_decomposition(const TwistOperator& T, const Vec& w, const Vec& v, long half_width) {
  const TwistedModule& M = T.module();
  std::string in = inputs(T, {{"w", &w}, {"v", &v}});
  int bound = M.semisimple() ? 0 : M.log_bound();
  Window win = box({X}, half_width, bound);
  std::vector<Vec> orbit = nilpotent_orbit([&M](const Vec& x) { return M.N_V(x); }, v, bound);

  // Z(w,x)v := Ytw(w,x) x^{N} v
  typename LinCombNode<Vec>::Terms zt;
  for (size_t j = 0; j < orbit.size(); ++j) {
    if (orbit[j].is_zero()) continue;
    zt.push_back({Scalar(Q(1) / factorial(long(j))), mul<Vec>(power(log_var(X), int(j)), T.field(w, orbit[j], X))});
  }
  VSeries Z = zt.empty() ? zero_series<Vec>() : lincomb<Vec>(std::move(zt));
  for (const Monomial& m : window_monomials(win, {&Z->support()})) {
    if (m.k[X] == 0) continue;
    Vec c = Z->coeff(m);
    if (!c.is_zero())
      return CheckFailure{"twist-decomposition-log-free", in + " at " + m.str(win.mask) + ": " + vec_str(M.W(), c)};
  }

  // Ytw(w,x)v = Z_0(w,x) x^{-N} v with Z_0 the log-constant part of Ytw
  typename LinCombNode<Vec>::Terms rt;
  for (size_t j = 0; j < orbit.size(); ++j) {
    if (orbit[j].is_zero()) continue;
    VSeries full = T.field(w, orbit[j], X);
    Support s = full->support();
    s.v[X].log_bound = 0;
    VSeries z0 = make_series<Vec>(s, [full](const Monomial& mm) { return mm.k[X] ? Vec{} : full->coeff(mm); });
    Scalar c = Scalar(Q(1) / factorial(long(j))) * Scalar(long(j % 2 ? -1 : 1));
    rt.push_back({c, mul<Vec>(power(log_var(X), int(j)), z0)});
  }
  VSeries rebuilt = rt.empty() ? zero_series<Vec>() : lincomb<Vec>(std::move(rt));
  return compare_series("twist-decomposition", in, T.field(w, v, X), rebuilt, win, M.W());
}

CheckResult check_L_minus1_twist(const TwistOperator& T, const Vec& w, const Vec& v, long half_width) {
  const TwistedModule& M = T.module();
  std::string in = inputs(T, {{"w", &w}, {"v", &v}});
  Window win = box({X}, half_width, M.semisimple() ? 0 : M.log_bound());
  VSeries d = derivative<Vec>(T.field(w, v, X), X);
  if (auto r = compare_series("L(-1)-twist-derivative", in, d, T.field(M.L_W(-1, w), v, X), win, M.W())) return r;
  VSeries comm = sub<Vec>(apply_map(T.field(w, v, X), [&M](const Vec& x) { return M.L_W(-1, x); }),
                          T.field(w, M.L_V(-1, v), X));
  return compare_series("L(-1)-twist-commutator", in, d, comm, win, M.W());
}

namespace {

constexpr int kLeftVars[] = {X1, X2};
constexpr int kRightVars[] = {X3, X4};

class RecenteredNode final : public Node<Vec> {
 public:
  RecenteredNode(const TwistOperator& T, Support s, std::vector<Vec> left, Vec w, std::vector<Vec> right, Vec v)
      : Node<Vec>(std::move(s)), T_(T), left_(std::move(left)), w_(std::move(w)), right_(std::move(right)), v_(std::move(v)) {}

 protected:
  Vec compute(const Monomial& m) const override {
    const TwistedModule& M = T_.module();
    for (int i = 0; i < kMaxVars; ++i)
      if (m.k[i]) return {};
    // u' = Y_V(r_1,z_1)..Y_V(r_l,z_l)v
    Vec up = v_;
    for (size_t j = right_.size(); j-- > 0 && !up.is_zero();) up = M.coeff_V(right_[j], m.e[kRightVars[j]], up);
    if (up.is_zero()) return {};
    Exponent lo = M.lowest_exponent(up, w_);
    long budget = (m.e[X] - lo).floor();
    if (budget < 0) return {};
    // s = n + sum j_i, with n the power of L(-1) and j_i the shift of the
    // i-th re-centred field; Z[n] collects everything with a given n
    std::vector<Vec> Z(budget + 1);
    std::function<void(long, int, long, const Vec&, const Scalar&)> rec = [&](long s, int q, long used, const Vec& y,
                                                                              const Scalar& c) {
      if (q < 0) {
        Z[s - used] += y * c;
        return;
      }
      for (long j = 0; used + j <= s; ++j) {
        Exponent e = m.e[kLeftVars[q]] + Exponent(j);
        Vec y2 = M.coeff(left_[q], e, 0, y);
        if (y2.is_zero()) continue;
        Q b = binom(e.to_q(), j);
        if (b == 0) continue;
        if (j % 2) b = -b;
        rec(s, q - 1, used + j, y2, c * Scalar(b));
      }
    };
    for (long s = 0; s <= budget; ++s) {
      Exponent ey = m.e[X] - Exponent(s);
      Vec y = M.coeff(up, ey, 0, w_);
      if (y.is_zero()) continue;
      y *= Scalar::expi(ey);
      rec(s, int(left_.size()) - 1, 0, y, Scalar::one());
    }
    // sum_n L(-1)^n/n! Z[n] by Horner
    Vec out;
    for (long n = budget; n >= 0; --n) {
      if (!out.is_zero()) out = M.L_W(-1, out) * Scalar(Q(1) / Q(n + 1));
      out += Z[n];
    }
    if (parity_in(M.V(), up) & parity_in(M.W(), w_)) out *= Scalar(-1L);
    return out;
  }

 private:
  const TwistOperator& T_;
  std::vector<Vec> left_;
  Vec w_;
  std::vector<Vec> right_;
  Vec v_;
};

std::string mixed_inputs(const TwistOperator& T, const std::vector<Vec>& left, const Vec& w, const std::vector<Vec>& right,
                         const Vec& v) {
  const TwistedModule& M = T.module();
  std::string s = M.name() + ":";
  for (size_t i = 0; i < left.size(); ++i) s += " v" + std::to_string(i + 1) + "=" + vec_str(M.V(), left[i]);
  s += " w=" + vec_str(M.W(), w);
  for (size_t i = 0; i < right.size(); ++i) s += " r" + std::to_string(i + 1) + "=" + vec_str(M.V(), right[i]);
  s += " v=" + vec_str(M.V(), v);
  return s;
}

// kernel(x_o, x_i) times a chain whose factors at slots idx, idx+1 carry x_o
// and x_i, the kernel expanded in nonnegative powers of x_i. The sum over the
// kernel terms stops where the inner factor would land below level zero.
class PairProductNode final : public Node<Vec> {
 public:
  PairProductNode(SSeries kernel, std::vector<Factor> f, size_t idx, Vec v)
      : Node<Vec>(make_sup(kernel, f, v)), k_(std::move(kernel)), f_(std::move(f)), idx_(idx), v_(std::move(v)) {
    chain_ = chain(f_, v_);
  }

 protected:
  Vec compute(const Monomial& m) const override {
    const int xo = f_[idx_].var, xi = f_[idx_ + 1].var;
    const Support& ks = k_->support();
    if (!ks.degree || !ks.v[xi].lo || ks.v[xi].cosets.size() != 1) throw EngineError("pair kernel must be homogeneous");
    Vec in = v_;
    for (size_t i = f_.size(); i-- > idx_ + 2 && !in.is_zero();) in = f_[i].act(m.e[f_[i].var], m.k[f_[i].var], in);
    if (in.is_zero()) return {};
    auto low = f_[idx_ + 1].lowest(in);
    if (!low) throw EngineError("inner factor has no lower bound");
    Exponent lo = *ks.v[xi].lo;
    lo += (ks.v[xi].cosets[0] - lo).residue();
    Vec out;
    for (Exponent ei = lo; m.e[xi] - ei >= *low; ei += Exponent(1)) {
      if (ks.v[xi].hi && ei > *ks.v[xi].hi) break;
      Monomial km, cm = m;
      km.e[xi] = ei;
      km.e[xo] = *ks.degree - ei;
      Scalar c = k_->coeff(km);
      if (c.is_zero()) continue;
      cm.e[xi] = m.e[xi] - ei;
      cm.e[xo] = m.e[xo] - km.e[xo];
      Vec y = chain_->coeff(cm);
      if (!y.is_zero()) out += c * y;
    }
    return out;
  }

 private:
  static Support make_sup(const SSeries& k, const std::vector<Factor>& f, const Vec& v) {
    Support s = chain(f, v)->support();
    for (int var = 0; var < kMaxVars; ++var) {
      if (!(k->support().mask & bit(var))) continue;
      VarSupport vs = s.v[var];
      std::vector<Exponent> cos;
      for (Exponent a : vs.cosets)
        for (Exponent b : k->support().v[var].cosets) {
          Exponent r = (a + b).residue();
          if (std::find(cos.begin(), cos.end(), r) == cos.end()) cos.push_back(r);
        }
      vs.cosets = cos;
      vs.lo.reset();
      vs.hi.reset();
      s.with(var, vs);
    }
    s.degree.reset();
    return s;
  }
  SSeries k_;
  std::vector<Factor> f_;
  size_t idx_;
  Vec v_;
  VSeries chain_;
};

Exponent alpha_sum(const TwistedModule& M, const std::vector<Vec>& vs, const Vec& v) {
  Exponent a = M.alpha_of(v);
  for (auto& x : vs) a += M.alpha_of(x);
  return a.residue();
}

}  // namespace

CheckResult check_mixed_product(const TwistOperator& T, const std::vector<Vec>& left, const Vec& w,
                                const std::vector<Vec>& right, const Vec& v, long half_width) {
  const TwistedModule& M = T.module();
  require_log_free(M, "mixed products");
  if (left.size() > 2 || right.size() > 2) throw EngineError("mixed products support at most two fields on each side");
  std::vector<Factor> f;
  for (size_t i = 0; i < left.size(); ++i) f.push_back(module_factor(M, left[i], kLeftVars[i]));
  f.push_back(twist_factor(T, w, X, alpha_sum(M, right, v)));
  for (size_t i = 0; i < right.size(); ++i) f.push_back(algebra_factor(M, right[i], kRightVars[i]));
  VSeries lhs = chain(std::move(f), v);
  Support s = lhs->support();
  s.degree.reset();
  VSeries rhs = std::make_shared<RecenteredNode>(T, s, left, w, right, v);
  Window win;
  for (size_t i = 0; i < left.size(); ++i) win.mask |= bit(kLeftVars[i]);
  for (size_t i = 0; i < right.size(); ++i) win.mask |= bit(kRightVars[i]);
  win.mask |= bit(X);
  for (int i = 0; i < kMaxVars; ++i) {
    win.lo[i] = Exponent(-half_width);
    win.hi[i] = Exponent(half_width);
  }
  return compare_series("mixed-product", mixed_inputs(T, left, w, right, v), lhs, rhs, win, M.W());
}

CheckResult check_mixed_permutation(const TwistOperator& T, const std::vector<Vec>& left, const Vec& w,
                                    const std::vector<Vec>& right, const Vec& v, int pos, long half_width) {
  const TwistedModule& M = T.module();
  require_log_free(M, "mixed permutations");
  const int k = int(left.size()), l = int(right.size());
  if (k > 2 || l > 2) throw EngineError("mixed products support at most two fields on each side");
  if (pos < 0 || pos + 1 > k + l) throw EngineError("transposition outside the product");

  // slots: 0..k-1 twisted, k twist operator, k+1..k+l algebra; slot i keeps
  // its own variable when moved
  struct Slot {
    int kind;  // 0 twisted field, 1 twist operator, 2 algebra field
    Vec vec;
    int var;
  };
  std::vector<Slot> slots;
  for (int i = 0; i < k; ++i) slots.push_back({0, left[i], kLeftVars[i]});
  slots.push_back({1, w, X});
  for (int i = 0; i < l; ++i) slots.push_back({2, right[i], kRightVars[i]});

  auto factors = [&](const std::vector<Slot>& ss) {
    std::vector<Factor> f;
    for (size_t i = 0; i < ss.size(); ++i) {
      const Slot& s = ss[i];
      if (s.kind == 0) f.push_back(module_factor(M, s.vec, s.var));
      if (s.kind == 2) f.push_back(algebra_factor(M, s.vec, s.var));
      if (s.kind == 1) {
        std::vector<Vec> inner;
        for (size_t j = i + 1; j < ss.size(); ++j) inner.push_back(ss[j].vec);
        f.push_back(twist_factor(T, s.vec, s.var, alpha_sum(M, inner, v)));
      }
    }
    return f;
  };

  Slot a = slots[pos], b = slots[pos + 1];
  std::vector<Slot> swapped = slots;
  SSeries k1, k2;
  int sign = 1;
  if (a.kind != 1 && b.kind != 1) {
    // two fields of the same kind: (x_a - x_b)^{M_ab}, Koszul sign
    Exponent m(weak_commutativity_order(M.YV(), a.vec, b.vec));
    k1 = k2 = binomial_expand(m, a.var, b.var);
    sign = (parity_in(M.V(), a.vec) & parity_in(M.V(), b.vec)) ? -1 : 1;
    std::swap(swapped[pos], swapped[pos + 1]);
  } else {
    // a twisted field passes the twist operator and becomes an algebra field
    const Slot& f = a.kind == 1 ? b : a;
    const Slot& t = a.kind == 1 ? a : b;
    Exponent al = M.alpha_of(f.vec);
    Exponent m = al + Exponent(std::max(T.commutativity_order(f.vec, t.vec), 1L));
    SSeries before = binomial_expand(m, f.var, t.var), after = minus_convention(m, f.var, t.var);
    sign = sign_uw(M, f.vec, t.vec);
    swapped[pos] = b;
    swapped[pos + 1] = a;
    if (a.kind == 0) {
      swapped[pos] = t;
      swapped[pos + 1] = Slot{2, f.vec, f.var};
      k1 = before;
      k2 = after;
    } else {
      swapped[pos] = Slot{0, f.vec, f.var};
      swapped[pos + 1] = t;
      k1 = after;
      k2 = before;
    }
  }
  VSeries lhs = std::make_shared<PairProductNode>(k1, factors(slots), size_t(pos), v);
  VSeries rhs = scale<Vec>(Scalar(long(sign)), std::make_shared<PairProductNode>(k2, factors(swapped), size_t(pos), v));
  Window win;
  for (auto& s : slots) {
    win.mask |= bit(s.var);
    win.lo[s.var] = Exponent(-half_width);
    win.hi[s.var] = Exponent(half_width);
  }
  return compare_series("mixed-permutation", mixed_inputs(T, left, w, right, v) + " swap=" + std::to_string(pos), lhs, rhs,
                        win, M.W());
}

}  // namespace twistvo
