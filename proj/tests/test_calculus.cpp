#include <random>

#include "doctest.h"
#include "twistvo/calculus.hpp"

using namespace twistvo;

namespace {

Exponent ex(long n, long d = 1) { return Exponent::frac(n, d); }

Monomial mono(std::initializer_list<std::pair<int, Exponent>> p) {
  Monomial m;
  for (auto [v, e] : p) m.e[v] = e;
  return m;
}

template <class T>
void require_equal(const Series<T>& a, const Series<T>& b, const Window& w) {
  auto mm = compare_on_window(a, b, w);
  if (mm) FAIL_CHECK("mismatch at " << mm->m.str(w.mask));
  CHECK(!mm);
}

}  // namespace

TEST_CASE("binomial coefficients follow the ratio recurrence") {
  for (auto A : {ex(1, 2), ex(-3, 4), ex(5), ex(-2)}) {
    auto s = binomial_expand(A, X1, X2);
    Q c = 1, a = A.to_q();
    for (long n = 0; n < 12; ++n) {
      Scalar got = s->coeff(mono({{X1, A - Exponent(n)}, {X2, Exponent(n)}}));
      CHECK(got == Scalar(c));
      c = -c * (a - n) / (n + 1);
    }
  }
}

TEST_CASE("polynomial binomial has finite support") {
  auto s = binomial_expand(ex(3), X1, X2);
  CHECK(s->coeff(mono({{X1, ex(-1)}, {X2, ex(4)}})).is_zero());
  CHECK(s->coeff(mono({{X1, ex(0)}, {X2, ex(3)}})) == Scalar(-1L));
}

TEST_CASE("binomial powers add") {
  std::mt19937 rng(20261018);
  std::uniform_int_distribution<int> num(-12, 12);
  auto w = Window::box({X1, X2}, ex(-8), ex(6));
  for (int trial = 0; trial < 12; ++trial) {
    Exponent A = ex(num(rng), 4), B = ex(num(rng), 4);
    auto lhs = mul<Scalar>(binomial_expand(A, X1, X2), binomial_expand(B, X1, X2));
    require_equal(lhs, binomial_expand(A + B, X1, X2), w);
  }
}

TEST_CASE("binomial times its inverse is one") {
  auto w = Window::box({X1, X2}, ex(-6), ex(6));
  auto p = mul<Scalar>(binomial_expand(ex(1, 2), X1, X2), binomial_expand(ex(-1, 2), X1, X2));
  require_equal(p, constant(Scalar::one()), w);
}

TEST_CASE("minus convention squares to the plain difference") {
  auto w = Window::box({X1, X2}, ex(-6), ex(6));
  auto m = minus_convention(ex(1, 2), X1, X2);
  require_equal(mul<Scalar>(m, m), binomial_expand(ex(1), X1, X2), w);
  // integral powers agree with the ordinary expansion when polynomial
  require_equal(minus_convention(ex(2), X1, X2), binomial_expand(ex(2), X1, X2), w);
}

TEST_CASE("three-term delta identity") {
  auto w = Window::box({X0, X1, X2}, ex(-5), ex(5));
  auto lhs = sub(delta_diff(X0, X1, X2), delta_diff_minus(X0, X1, X2));
  require_equal(lhs, delta_sum(X1, X2, X0), w);
}

TEST_CASE("twisted delta sum matches the x2-centered form") {
  // x2^{-1} delta((x1-x0)/x2) ((x1-x0)/x2)^{-alpha}, written out directly
  for (auto alpha : {ex(1, 2), ex(1, 4), ex(-3, 8)}) {
    Support s;
    s.with(X2, VarSupport::coset(alpha)).with(X1, VarSupport::coset(-alpha));
    VarSupport x0s = VarSupport::integral();
    x0s.lo = Exponent(0);
    s.with(X0, x0s);
    s.degree = Exponent(-1);
    auto oracle = make_series<Scalar>(s, [](const Monomial& m) {
      Q top = (m.e[X1] + m.e[X0]).to_q();  // n - alpha
      long j = m.e[X0].to_long();
      Q c = binom(top, j);
      return Scalar(j % 2 ? Q(-c) : c);
    });
    require_equal(delta_sum(X1, X2, X0, alpha), oracle, Window::box({X0, X1, X2}, ex(-4), ex(4)));
  }
}

TEST_CASE("delta ratio absorbs substitution") {
  // x1^{-1} delta(x2/x1) x1^3 = x1^{-1} delta(x2/x1) x2^3
  auto w = Window::box({X1, X2}, ex(-6), ex(6));
  auto d = delta_ratio(X1, X2);
  require_equal(mul<Scalar>(monomial({{X1, ex(3)}}), d), mul<Scalar>(monomial({{X2, ex(3)}}), d), w);
}

TEST_CASE("log derivatives") {
  auto w = Window::box({X1, X2}, ex(-6), ex(6), 1);
  auto lg = log_binomial(X1, X2);
  require_equal(derivative(lg, X1), binomial_expand(ex(-1), X1, X2), w);
  require_equal(derivative(lg, X2), scale(Scalar(-1L), binomial_expand(ex(-1), X1, X2)), w);
  auto lm = log_minus(X1, X2);
  require_equal(derivative(lm, X1), minus_convention(ex(-1), X1, X2), w);
}

TEST_CASE("compose reproduces a binomial series") {
  Exponent A = ex(3, 8);
  Q a = A.to_q();
  auto z = monomial({{X2, ex(1)}, {X1, ex(-1)}});
  auto c = compose([a](long k) { return binom(a, k); }, z, X2);
  auto rhs = mul<Scalar>(monomial({{X1, -A}}), binomial_sum(A, X1, X2));
  require_equal(c, rhs, Window::box({X1, X2}, ex(-6), ex(6)));
}

TEST_CASE("branch shift is a group action") {
  auto s = mul<Scalar>(binomial_expand(ex(1, 4), X1, X2), log_binomial(X1, X2));
  auto w = Window::box({X1, X2}, ex(-5), ex(5), 1);
  for (int p : {-2, -1, 1, 3})
    for (int q : {-1, 2}) require_equal(branch_shift(branch_shift(s, X1, p), X1, q), branch_shift(s, X1, p + q), w);
  auto integral = binomial_expand(ex(-2), X1, X2);
  require_equal(branch_shift(integral, X1, 1), integral, w);
  // a full turn moves x^{1/4} by i
  auto r = branch_shift(monomial({{X1, ex(1, 4)}}), X1, 1);
  CHECK(r->coeff(mono({{X1, ex(1, 4)}})) == Scalar::expi(make_q(1, 2)));
}

TEST_CASE("log substitution") {
  auto r = log_substitute(monomial({{YV, ex(1, 2)}}), YV, X);
  CHECK(r->coeff(mono({{X, ex(1, 2)}})) == Scalar::expi(make_q(1, 2)));
}

TEST_CASE("nilpotent binomial satisfies its differential equation") {
  // N: e1 -> e0 -> 0
  LinearMap N = [](const Vec& v) { return Vec::basis(0, v.at(1)); };
  Vec v = Vec::basis(1);
  auto s = nilpotent_binomial(N, v, X1, X2, 4);
  auto lhs = derivative(s, X1);
  auto rhs = mul<Vec>(binomial_expand(ex(-1), X1, X2), apply_map(s, N));
  require_equal(lhs, rhs, Window::box({X1, X2}, ex(-5), ex(5), 1));
  CHECK_THROWS_AS(nilpotent_orbit([](const Vec& x) { return x; }, v, 3), NotNilpotent);
}

TEST_CASE("engine errors") {
  CHECK_THROWS_AS(mul<Scalar>(delta(X), delta(X)), InfiniteConvolution);
  CHECK_THROWS_AS(residue(binomial_expand(ex(1, 2), X1, X2), X1), NonMeromorphicVariable);
  CHECK_THROWS_AS(residue(log_binomial(X1, X2), X1), NonMeromorphicVariable);
  auto r = residue(binomial_expand(ex(-1), X0, X2), X0);
  CHECK(r->coeff(mono({{X2, ex(0)}})) == Scalar::one());
}
