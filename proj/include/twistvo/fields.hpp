#pragma once

#include <functional>
#include <vector>

#include "twistvo/series.hpp"
#include "twistvo/twisted_module.hpp"

namespace twistvo {

// One operator-valued series in a single variable: its coefficient at
// var^e (log var)^k, acting on a vector.
struct Factor {
  int var = X;
  VarSupport support;  // lo is only trusted for the innermost factor
  std::function<Vec(Exponent e, int k, const Vec& in)> act;
  // lowest exponent when acting on a given vector, if known
  std::function<std::optional<Exponent>(const Vec& in)> lowest;
};

// factors[0] is leftmost: F_0(x_0) F_1(x_1) ... F_n(x_n) w
VSeries chain(std::vector<Factor> factors, const Vec& w);

// Y^g_W(u, var) on the module
Factor module_factor(const TwistedModule& M, const Vec& u, int var);
// Y_V(u, var) on V
Factor algebra_factor(const VertexEngine& YV, const Vec& u, int var);
inline Factor algebra_factor(const TwistedModule& M, const Vec& u, int var) { return algebra_factor(M.YV(), u, var); }

// <dual, s> with the basis of the target space orthonormal
SSeries pair(const VSeries& s, const Vec& dual);

// Y^g_W(Y_V(u,x0)v, x2) w
VSeries module_iterate(const TwistedModule& M, const Vec& u, int x0, const Vec& v, int x2, const Vec& w);

// Expand a log-free series F(x) at x -> x0 + x2 in nonnegative powers of x2,
// for an operator factor applied to a vector series in x2:
// (x0+x2)^shift Y(u, x0+x2) T(x2)
VSeries shifted_apply(const TwistedModule& M, const Vec& u, long shift, int x0, int x2, const VSeries& T);

}  // namespace twistvo
