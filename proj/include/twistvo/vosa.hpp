#pragma once

#include "twistvo/check.hpp"
#include "twistvo/vertex.hpp"

namespace twistvo {

// <v', Y_V(u,x) w> as a series in X
SSeries vertex_matrix_element(const VertexEngine& V, const Vec& dual, const Vec& u, const Vec& w);

// Identity, creation, L(-1)-derivative and L(-1)-commutator, L(0)-grading and
// parity conservation on every basis pair up to the cutoff. Only coefficients
// landing at weight <= cutoff are compared.
CheckResult check_axioms(const VertexEngine& V, const Vec& omega, Exponent weight_cutoff);

// Minimal M >= 0 with x^M Y_V(u,x) v in V[[x]]
long weak_commutativity_order(const VertexEngine& V, const Vec& u, const Vec& v);

// (x1-x2)^M Y(u,x1)Y(v,x2)w = (-1)^{|u||v|} (x1-x2)^M Y(v,x2)Y(u,x1)w with M = max(M_{u,v}, 1)
CheckResult check_weak_commutativity_V(const VertexEngine& V, const Vec& u, const Vec& v, const Vec& w, long half_width);

}  // namespace twistvo
