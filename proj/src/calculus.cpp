#include "twistvo/calculus.hpp"

#include <mutex>

namespace twistvo {

namespace {

VarSupport coset_of(Exponent r) { return VarSupport::coset(r); }

VarSupport from_below(Exponent lo, Exponent r) {
  VarSupport s = VarSupport::coset(r);
  s.lo = lo;
  return s;
}

VarSupport from_above(Exponent hi, Exponent r) {
  VarSupport s = VarSupport::coset(r);
  s.hi = hi;
  return s;
}

bool nonneg_integer(Exponent A) { return A.is_integer() && A >= Exponent(0); }

}  // namespace

SSeries monomial(std::initializer_list<std::pair<int, Exponent>> powers, Scalar c) {
  Support s;
  Monomial at;
  Exponent deg;
  for (auto [v, e] : powers) {
    VarSupport vs = VarSupport::coset(e);
    vs.lo = e;
    vs.hi = e;
    s.with(v, vs);
    at.e[v] = e;
    deg += e;
  }
  s.degree = deg;
  return make_series<Scalar>(s, [at, c](const Monomial& m) { return m == at ? c : Scalar{}; });
}

SSeries constant(Scalar c) {
  Support s;
  s.degree = Exponent(0);
  return make_series<Scalar>(s, [c](const Monomial&) { return c; });
}

SSeries binomial_expand(Exponent A, int xi, int xj) {
  Support s;
  VarSupport si = from_above(A, A), sj = from_below(Exponent(0), Exponent(0));
  if (nonneg_integer(A)) {
    si.lo = Exponent(0);
    sj.hi = A;
  }
  s.with(xi, si).with(xj, sj);
  s.degree = A;
  Q a = A.to_q();
  return make_series<Scalar>(s, [a, xj](const Monomial& m) {
    long n = m.e[xj].to_long();
    Q c = binom(a, n);
    if (n % 2) c = -c;
    return Scalar(c);
  });
}

SSeries minus_convention(Exponent A, int xi, int xj) { return scale(Scalar::expi(A), binomial_expand(A, xj, xi)); }

SSeries binomial_sum(Exponent A, int xi, int xj) {
  Support s;
  VarSupport si = from_above(A, A), sj = from_below(Exponent(0), Exponent(0));
  if (nonneg_integer(A)) {
    si.lo = Exponent(0);
    sj.hi = A;
  }
  s.with(xi, si).with(xj, sj);
  s.degree = A;
  Q a = A.to_q();
  return make_series<Scalar>(s, [a, xj](const Monomial& m) { return Scalar(binom(a, m.e[xj].to_long())); });
}

SSeries log_binomial(int xi, int xj) {
  Support s;
  VarSupport si = from_above(Exponent(0), Exponent(0));
  si.log_bound = 1;
  s.with(xi, si).with(xj, from_below(Exponent(0), Exponent(0)));
  s.degree = Exponent(0);
  return make_series<Scalar>(s, [xi, xj](const Monomial& m) {
    if (m.k[xi] == 1) return (m.e[xj] == Exponent(0)) ? Scalar::one() : Scalar{};
    long n = m.e[xj].to_long();
    if (n == 0) return Scalar{};
    return Scalar(make_q(-1, n));
  });
}

SSeries log_minus(int xi, int xj) { return add(log_binomial(xj, xi), constant(Scalar::pi_pow(1))); }

SSeries log_sum(int xi, int xj) {
  Support s;
  VarSupport si = from_above(Exponent(0), Exponent(0));
  si.log_bound = 1;
  s.with(xi, si).with(xj, from_below(Exponent(0), Exponent(0)));
  s.degree = Exponent(0);
  return make_series<Scalar>(s, [xi, xj](const Monomial& m) {
    if (m.k[xi] == 1) return (m.e[xj] == Exponent(0)) ? Scalar::one() : Scalar{};
    long n = m.e[xj].to_long();
    if (n == 0) return Scalar{};
    return Scalar(make_q(n % 2 ? 1 : -1, n));
  });
}

SSeries log_var(int x, Scalar c) {
  Support s;
  VarSupport vs = VarSupport::integral();
  vs.lo = Exponent(0);
  vs.hi = Exponent(0);
  vs.log_bound = 1;
  s.with(x, vs);
  s.degree = Exponent(0);
  return make_series<Scalar>(s, [x, c](const Monomial& m) { return m.k[x] == 1 ? c : Scalar{}; });
}

SSeries power(const SSeries& s, int k) {
  SSeries r = constant(Scalar::one());
  for (int i = 0; i < k; ++i) r = (i == 0) ? s : mul<Scalar>(s, r);
  return r;
}

namespace {

class ComposeNode final : public Node<Scalar> {
 public:
  ComposeNode(std::function<Q(long)> c, SSeries z, int var) : Node<Scalar>(make_sup(z->support(), var)), c_(std::move(c)), z_(std::move(z)), var_(var) {}

 protected:
  Scalar compute(const Monomial& m) const override {
    long n = m.e[var_].to_long();
    Scalar acc;
    for (long j = 0; j <= n; ++j) {
      Q cj = c_(j);
      if (cj == 0) continue;
      Scalar t = pow_at(j)->coeff(m);
      if (!t.is_zero()) acc += t * Scalar(cj);
    }
    return acc;
  }

 private:
  static Support make_sup(const Support& z, int var) {
    Support s;
    for (int v = 0; v < kMaxVars; ++v) {
      if (!(z.mask & bit(v))) continue;
      const VarSupport& zs = z.v[v];
      if (zs.log_bound != 0) throw EngineError("compose: inner series has log terms");
      if (zs.cosets.size() != 1 || zs.cosets[0] != Exponent(0)) throw EngineError("compose: inner series needs integral exponents");
      VarSupport vs = VarSupport::integral();
      if (v == var) {
        if (!zs.lo || *zs.lo < Exponent(1)) throw EngineError("compose: inner series must have positive order");
        vs.lo = Exponent(0);
      }
      s.with(v, vs);
    }
    if (z.degree && *z.degree == Exponent(0)) s.degree = Exponent(0);
    return s;
  }

  SSeries pow_at(long j) const {
    std::lock_guard lk(mu_);
    while (long(pows_.size()) <= j) pows_.push_back(pows_.empty() ? constant(Scalar::one()) : mul<Scalar>(z_, pows_.back()));
    return pows_[j];
  }

  std::function<Q(long)> c_;
  SSeries z_;
  int var_;
  mutable std::mutex mu_;
  mutable std::vector<SSeries> pows_;
};

}  // namespace

SSeries compose(std::function<Q(long)> c, SSeries z, int order_var) { return std::make_shared<ComposeNode>(std::move(c), std::move(z), order_var); }

std::vector<Vec> nilpotent_orbit(const LinearMap& N, const Vec& v, int bound) {
  std::vector<Vec> orbit;
  Vec cur = v;
  while (!cur.is_zero()) {
    if (int(orbit.size()) > bound) throw NotNilpotent("nilpotent action does not vanish within bound " + std::to_string(bound));
    orbit.push_back(cur);
    cur = N(cur);
  }
  return orbit;
}

VSeries nilpotent_power(const LinearMap& N, int x, const Vec& v, int bound) {
  auto orbit = nilpotent_orbit(N, v, bound);
  Support s;
  VarSupport vs = VarSupport::integral();
  vs.lo = Exponent(0);
  vs.hi = Exponent(0);
  vs.log_bound = orbit.empty() ? 0 : int(orbit.size()) - 1;
  s.with(x, vs);
  return make_series<Vec>(s, [orbit, x](const Monomial& m) {
    size_t k = m.k[x];
    if (k >= orbit.size()) return Vec{};
    Vec r = orbit[k];
    r *= Scalar(Q(1) / factorial(long(k)));
    return r;
  });
}

namespace {
VSeries exp_log_series(const LinearMap& N, const Vec& v, const SSeries& lg, int bound) {
  auto orbit = nilpotent_orbit(N, v, bound);
  std::vector<std::pair<SSeries, Vec>> parts;
  for (size_t k = 0; k < orbit.size(); ++k) {
    Vec vk = orbit[k];
    vk *= Scalar(Q(1) / factorial(long(k)));
    parts.push_back({power(lg, int(k)), vk});
  }
  return tensor_sum(parts);
}
}  // namespace

VSeries nilpotent_binomial(const LinearMap& N, const Vec& v, int xi, int xj, int bound) { return exp_log_series(N, v, log_binomial(xi, xj), bound); }

VSeries nilpotent_minus(const LinearMap& N, const Vec& v, int xi, int xj, int bound) { return exp_log_series(N, v, log_minus(xi, xj), bound); }

SSeries delta_diff(int x0, int x1, int x2, Exponent alpha) {
  Support s;
  s.with(x0, coset_of(-alpha)).with(x1, coset_of(alpha)).with(x2, from_below(Exponent(0), Exponent(0)));
  s.degree = Exponent(-1);
  return make_series<Scalar>(s, [x0, x2, alpha](const Monomial& m) {
    Exponent A = -m.e[x0] - Exponent(1);  // n + alpha
    long c = m.e[x2].to_long();
    Q b = binom(A.to_q(), c);
    if (c % 2) b = -b;
    return Scalar(b);
  });
}

SSeries delta_diff_minus(int x0, int x1, int x2, Exponent alpha) {
  Support s;
  s.with(x0, coset_of(-alpha)).with(x1, from_below(Exponent(0), Exponent(0))).with(x2, coset_of(alpha));
  s.degree = Exponent(-1);
  return make_series<Scalar>(s, [x0, x1](const Monomial& m) {
    Exponent A = -m.e[x0] - Exponent(1);
    long j = m.e[x1].to_long();
    Q b = binom(A.to_q(), j);
    if (j % 2) b = -b;
    return Scalar::expi(A) * Scalar(b);
  });
}

SSeries delta_sum(int x1, int x2, int x0, Exponent alpha) {
  Support s;
  s.with(x1, coset_of(-alpha)).with(x2, coset_of(alpha)).with(x0, from_below(Exponent(0), Exponent(0)));
  s.degree = Exponent(-1);
  return make_series<Scalar>(s, [x1, x0](const Monomial& m) {
    Exponent A = -m.e[x1] - Exponent(1);
    return Scalar(binom(A.to_q(), m.e[x0].to_long()));
  });
}

SSeries delta_ratio(int x1, int x2) {
  Support s;
  s.with(x1, VarSupport::integral()).with(x2, VarSupport::integral());
  s.degree = Exponent(-1);
  return make_series<Scalar>(s, [](const Monomial&) { return Scalar::one(); });
}

SSeries delta(int x) {
  Support s;
  s.with(x, VarSupport::integral());
  return make_series<Scalar>(s, [](const Monomial&) { return Scalar::one(); });
}

}  // namespace twistvo
