#pragma once

#include <functional>
#include <initializer_list>
#include <utility>

#include "twistvo/series.hpp"

namespace twistvo {

// c * prod x^e
SSeries monomial(std::initializer_list<std::pair<int, Exponent>> powers, Scalar c = Scalar::one());
SSeries constant(Scalar c);

// (xi - xj)^A expanded in nonnegative powers of xj
SSeries binomial_expand(Exponent A, int xi, int xj);
// (-xj + xi)^A := (xj - xi)^A e^{pi i A}
SSeries minus_convention(Exponent A, int xi, int xj);
// (xi + xj)^A expanded in nonnegative powers of xj
SSeries binomial_sum(Exponent A, int xi, int xj);

// log(xi - xj) = log xi + log(1 - xj/xi)
SSeries log_binomial(int xi, int xj);
// log(-xj + xi) := log(xj - xi) + Pi
SSeries log_minus(int xi, int xj);
// log(xi + xj) = log xi + log(1 + xj/xi)
SSeries log_sum(int xi, int xj);
// c log x
SSeries log_var(int x, Scalar c = Scalar::one());

SSeries power(const SSeries& s, int k);
// sum_m c(m) z^m for z whose exponent in order_var is >= 1 everywhere
SSeries compose(std::function<Q(long)> c, SSeries z, int order_var);

// N^k v for k = 0..; throws NotNilpotent if N^{bound+1} v != 0
std::vector<Vec> nilpotent_orbit(const LinearMap& N, const Vec& v, int bound);
// x^N v = sum_k (log x)^k N^k v / k!
VSeries nilpotent_power(const LinearMap& N, int x, const Vec& v, int bound);
// (xi - xj)^N v = e^{N log(xi - xj)} v
VSeries nilpotent_binomial(const LinearMap& N, const Vec& v, int xi, int xj, int bound);
// (-xj + xi)^N v = e^{N (log(xj - xi) + Pi)} v
VSeries nilpotent_minus(const LinearMap& N, const Vec& v, int xi, int xj, int bound);

// x0^{-1} delta((x1-x2)/x0) ((x1-x2)/x0)^alpha
SSeries delta_diff(int x0, int x1, int x2, Exponent alpha = Exponent(0));
// x0^{-1} delta((-x2+x1)/x0) ((-x2+x1)/x0)^alpha, minus convention
SSeries delta_diff_minus(int x0, int x1, int x2, Exponent alpha = Exponent(0));
// x1^{-1} delta((x2+x0)/x1) ((x2+x0)/x1)^alpha
SSeries delta_sum(int x1, int x2, int x0, Exponent alpha = Exponent(0));
// x1^{-1} delta(x2/x1)
SSeries delta_ratio(int x1, int x2);
// sum_{n in Z} x^n
SSeries delta(int x);

// x^n -> e^{2 pi i p n} x^n, log x -> log x + 2 p Pi
template <class T>
Series<T> branch_shift(Series<T> s, int var, int p) {
  if (p == 0) return s;
  return phase_shift<T>(std::move(s), var, var, 2 * p);
}
// y^n = e^{pi i n} x^n, log y = log x + Pi
template <class T>
Series<T> log_substitute(Series<T> s, int y, int x) {
  return phase_shift<T>(std::move(s), y, x, 1);
}

}  // namespace twistvo
