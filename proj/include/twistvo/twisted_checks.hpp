#pragma once

#include <vector>

#include "twistvo/check.hpp"
#include "twistvo/twisted_module.hpp"

namespace twistvo {

// Every checker compares vector-valued series (all output components at
// once) on the box |exponent| <= half_width in each variable involved.

// x0^{-1}d((x1-x2)/x0) Y(u,x1)Y(v,x2)w - e x0^{-1}d((-x2+x1)/x0) Y(v,x2)Y(u,x1)w
//   = x1^{-1}d((x2+x0)/x1) Y(Y_V(((x2+x0)/x1)^{L_g} u, x0)v, x2)w
// u must lie in one g-eigenspace of the semisimple part.
CheckResult check_twisted_jacobi(const TwistedModule& M, const Vec& u, const Vec& v, const Vec& w, long half_width);

// (x1-x2)^M Y(u,x1)Y(v,x2)w = e (-x2+x1)^M Y(v,x2)Y(u,x1)w, M = max(M_{u,v}, 1) from V
CheckResult check_twisted_weak_commutativity(const TwistedModule& M, const Vec& u, const Vec& v, const Vec& w,
                                             long half_width);

// supercommutator = Res_x0 of the right side of the Jacobi identity
CheckResult check_commutator_formula(const TwistedModule& M, const Vec& u, const Vec& v, const Vec& w, long half_width);

// x -> e^{2 pi i} x applied to Y(gu,x)w gives back Y(u,x)w
CheckResult check_equivariance(const TwistedModule& M, const Vec& u, const Vec& w, long half_width);

// g Y(u,x)w = Y(gu,x)gw
CheckResult check_g_compatibility(const TwistedModule& M, const Vec& u, const Vec& w, long half_width);

// d/dx Y(u,x)w = Y(L(-1)u,x)w = [L_W(-1), Y(u,x)]w
CheckResult check_L_minus1_derivative_W(const TwistedModule& M, const Vec& u, const Vec& w, long half_width);

// log-constant part of Y(u,x)w
VSeries y0_part(const TwistedModule& M, const Vec& u, const Vec& w, int var);

// Y(u,x) = Y_0(x^{-N}u, x) and Y(u,x) = x^{-N} Y_0(u,x) x^{N}
CheckResult check_y0_decomposition(const TwistedModule& M, const Vec& u, const Vec& w, long half_width);

// prod x_i^{alpha_i} prod_{i<j} (x_i-x_j)^{M_ij} Y(v_1,x_1)...Y(v_k,x_k)w as
// a series in X1..Xk (k <= 4)
VSeries prefactored_product(const TwistedModule& M, const std::vector<Vec>& vs, const Vec& w);

// the prefactored product vanishes outside the exponent box predicted by the
// gradings, for every output component
CheckResult check_product_polynomiality(const TwistedModule& M, const std::vector<Vec>& vs, const Vec& w, long half_width);

// prefactored products for the identity and the permuted ordering agree up to
// the Koszul sign; perm[i] is the position-i vector index
CheckResult check_permutation_symmetry(const TwistedModule& M, const std::vector<Vec>& vs, const Vec& w,
                                       const std::vector<int>& perm, long half_width);

// Koszul sign of reordering vectors of the given parities by perm
int koszul_sign(const std::vector<int>& parities, const std::vector<int>& perm);

}  // namespace twistvo
