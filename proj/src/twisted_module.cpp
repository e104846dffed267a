#include "twistvo/twisted_module.hpp"

#include <set>

namespace twistvo {

TwistedModule::TwistedModule(Parts p) : p_(std::move(p)) {
  if (!p_.Y0 || !p_.YV) throw EngineError("twisted module needs both vertex engines");
}

Vec TwistedModule::coeff(const Vec& u, Exponent e, int k, const Vec& w) const {
  if (!p_.N_V) return k == 0 ? p_.Y0->coeff(u, e, w) : Vec{};
  if (k > p_.log_bound) throw LogBoundExceeded("log power " + std::to_string(k) + " above the module bound");
  // Y(u,x) = Y0(x^{-N} u, x): the (log x)^k part is (-1)^k/k! Y0(N^k u)
  Vec Nu = u;
  for (int i = 0; i < k && !Nu.is_zero(); ++i) Nu = p_.N_V(Nu);
  if (Nu.is_zero()) return {};
  Vec r = p_.Y0->coeff(Nu, e, w);
  Q c = Q(1) / factorial(k);
  if (k % 2) c = -c;
  r *= Scalar(c);
  return r;
}

Vec TwistedModule::L_W(int n, const Vec& w) const { return p_.Y0->coeff(p_.omega, Exponent(-n - 2), w); }
Vec TwistedModule::L_V(int n, const Vec& v) const { return p_.YV->coeff(p_.omega, Exponent(-n - 2), v); }

Exponent TwistedModule::vacuum_weight() const {
  Vec vac = Vec::basis(W().vacuum(0));
  Vec l0 = L_W(0, vac);
  Scalar c = l0.at(W().vacuum(0));
  Vec expect = vac;
  expect *= c;
  if (!(l0 == expect)) throw EngineError("vacuum is not an L(0) eigenvector");
  if (!c.is_rational()) throw EngineError("vacuum weight is not rational");
  return Exponent(c.rational());
}

Exponent TwistedModule::alpha_of(const Vec& u) const {
  std::set<Exponent> a;
  for (auto& [i, c] : u.entries()) a.insert(p_.Y0->alpha_of(i));
  if (a.size() > 1) throw EngineError("vector mixes g-weights; decompose it first");
  return a.empty() ? Exponent(0) : *a.begin();
}

Exponent TwistedModule::weight_V(const Vec& u) const {
  std::set<Exponent> a;
  for (auto& [i, c] : u.entries()) a.insert(V().level(i));
  if (a.size() > 1) throw EngineError("vector is not homogeneous");
  return a.empty() ? Exponent(0) : *a.begin();
}

Exponent TwistedModule::level_W(const Vec& w) const {
  std::set<Exponent> a;
  for (auto& [i, c] : w.entries()) a.insert(W().level(i));
  if (a.size() > 1) throw EngineError("module vector is not homogeneous");
  return a.empty() ? Exponent(0) : *a.begin();
}

Exponent TwistedModule::lowest_exponent(const Vec& u, const Vec& w) const {
  Exponent hi_u, hi_w;
  for (auto& [i, c] : u.entries()) hi_u = std::max(hi_u, V().level(i));
  for (auto& [i, c] : w.entries()) hi_w = std::max(hi_w, W().level(i));
  return -(hi_u + hi_w);
}

VSeries TwistedModule::field(const Vec& u, const Vec& w, int var) const {
  Support s;
  VarSupport vs = VarSupport::coset(exponent_coset(u));
  vs.lo = lowest_exponent(u, w);
  vs.log_bound = 0;
  if (p_.N_V) {
    vs.log_bound = p_.log_bound;
    Vec t = u;
    for (int i = 0; i <= p_.log_bound && !t.is_zero(); ++i) t = p_.N_V(t);
    if (!t.is_zero()) throw LogBoundExceeded("N^k u survives past the module log bound; raise the Jordan cutoff");
  }
  s.with(var, vs);
  return make_series<Vec>(s, [this, u, w, var](const Monomial& m) { return coeff(u, m.e[var], m.k[var], w); });
}

VSeries TwistedModule::field_V(const Vec& u, const Vec& v, int var) const {
  Support s;
  VarSupport vs = VarSupport::integral();
  Exponent hi_u, hi_v;
  for (auto& [i, c] : u.entries()) hi_u = std::max(hi_u, V().level(i));
  for (auto& [i, c] : v.entries()) hi_v = std::max(hi_v, V().level(i));
  vs.lo = -(hi_u + hi_v);
  s.with(var, vs);
  return make_series<Vec>(s, [this, u, v, var](const Monomial& m) { return coeff_V(u, m.e[var], v); });
}

}  // namespace twistvo
