#include "twistvo/vosa.hpp"

#include "twistvo/calculus.hpp"
#include "twistvo/fields.hpp"

namespace twistvo {

namespace {

std::string at(const FockSpace& F, uint32_t u, uint32_t w, Exponent e) {
  return "u=" + F.name(u) + " w=" + F.name(w) + " at x^" + e.str();
}

int parity_or_throw(const FockSpace& F, const Vec& v) {
  int p = F.parity_of(v);
  if (p < 0) throw EngineError("vector is not parity-homogeneous");
  return p;
}

}  // namespace

SSeries vertex_matrix_element(const VertexEngine& V, const Vec& dual, const Vec& u, const Vec& w) {
  return pair(chain({algebra_factor(V, u, X)}, w), dual);
}

CheckResult check_axioms(const VertexEngine& V, const Vec& omega, Exponent cutoff) {
  const FockSpace& F = V.algebra();
  auto basis = F.basis_upto(cutoff);
  Vec vac = Vec::basis(F.vacuum());
  auto L = [&](int n, const Vec& v) { return V.coeff(omega, Exponent(-n - 2), v); };
  for (uint32_t w : basis) {
    Vec vw = Vec::basis(w);
    if (!(L(0, vw) == vw * Scalar(F.level(w).to_q()))) return CheckFailure{"L(0)-grading", "w=" + F.name(w) + " at L(0)"};
  }
  auto levels = F.levels_upto(cutoff);
  for (uint32_t u : basis) {
    Vec vu = Vec::basis(u);
    Vec Lu = L(-1, vu);
    int pu = F.parity(u);
    for (uint32_t w : basis) {
      Vec vw = Vec::basis(w);
      Vec Lw = L(-1, vw);
      Exponent base = F.level(u) + F.level(w);
      // e = level(out) - base, over the levels that actually occur
      for (Exponent l : levels) {
        Exponent e = l - base;
        Vec y = V.coeff(u, e, w);
        if (u == F.vacuum() && !(y == (e == Exponent(0) ? vw : Vec{}))) return CheckFailure{"identity", at(F, u, w, e)};
        if (w == F.vacuum() && e < Exponent(0) && !y.is_zero()) return CheckFailure{"creation", at(F, u, w, e)};
        if (w == F.vacuum() && e == Exponent(0) && !(y == vu)) return CheckFailure{"creation", at(F, u, w, e)};
        if (!y.is_zero() && parity_or_throw(F, y) != (pu ^ F.parity(w))) return CheckFailure{"parity", at(F, u, w, e)};
        Vec d = V.coeff(u, e + Exponent(1), w) * Scalar((e + Exponent(1)).to_q());
        if (!(d == V.coeff(Lu, e, vw))) return CheckFailure{"L(-1)-derivative", at(F, u, w, e)};
        if (!(d == L(-1, y) - V.coeff(vu, e, Lw))) return CheckFailure{"L(-1)-commutator", at(F, u, w, e)};
      }
    }
  }
  return std::nullopt;
}

long weak_commutativity_order(const VertexEngine& V, const Vec& u, const Vec& v) {
  Exponent hu, hv;
  for (auto& [i, c] : u.entries()) hu = std::max(hu, V.algebra().level(i));
  for (auto& [i, c] : v.entries()) hv = std::max(hv, V.module().level(i));
  // the exponent is level(out) - hv - hu, so walk the levels that occur
  for (Exponent l : V.module().levels_upto(hu + hv)) {
    Exponent e = l - hv - hu;
    if (e >= Exponent(0)) break;
    if (!V.coeff(u, e, v).is_zero()) return -e.floor();
  }
  return 0;
}

CheckResult check_weak_commutativity_V(const VertexEngine& V, const Vec& u, const Vec& v, const Vec& w, long half_width) {
  const FockSpace& F = V.algebra();
  long M = std::max(weak_commutativity_order(V, u, v), 1L);
  int eps = (parity_or_throw(F, u) & parity_or_throw(F, v)) ? -1 : 1;
  auto k = binomial_expand(Exponent(M), X1, X2);
  auto lhs = mul<Vec>(k, chain({algebra_factor(V, u, X1), algebra_factor(V, v, X2)}, w));
  auto rhs = scale(Scalar(eps), mul<Vec>(k, chain({algebra_factor(V, v, X2), algebra_factor(V, u, X1)}, w)));
  std::string in = "u=" + vec_str(F, u) + " v=" + vec_str(F, v) + " w=" + vec_str(F, w);
  return compare_series("weak-commutativity-V", in, lhs, rhs, Window::box({X1, X2}, Exponent(-half_width), Exponent(half_width)), F);
}

}  // namespace twistvo
