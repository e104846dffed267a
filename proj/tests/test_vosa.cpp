#include "doctest.h"
#include "twistvo/model.hpp"
#include "twistvo/vosa.hpp"

using namespace twistvo;

namespace {
Exponent ex(long n, long d = 1) { return Exponent::frac(n, d); }

void require_pass(const CheckResult& r) {
  if (r) FAIL_CHECK(r->what << " " << r->where);
  CHECK(!r);
}
}  // namespace

TEST_CASE("axioms on the shipped algebras") {
  Model f = build_model(free_fermion_desc());
  require_pass(check_axioms(*f.YV, f.omega, ex(5, 2)));
  Model b = build_model(boson1_desc());
  require_pass(check_axioms(*b.YV, b.omega, ex(3)));
  Model h = build_model(heis3_unipotent_desc());
  require_pass(check_axioms(*h.YV, h.omega, ex(2)));
}

TEST_CASE("a negated conformal vector breaks the derivative axiom") {
  EngineFaults faults;
  Model f = build_model(apply_mutation(free_fermion_desc(), "fermion.omega-sign", &faults));
  auto r = check_axioms(*f.YV, f.omega, ex(2));
  REQUIRE(r);
  CHECK(r->what == "L(0)-grading");
}

TEST_CASE("vertex matrix elements") {
  Model f = build_model(free_fermion_desc());
  Vec vac = Vec::basis(f.V->vacuum());
  auto s = vertex_matrix_element(*f.YV, vac, vac, vac);
  Monomial m;
  CHECK(s->coeff(m) == Scalar::one());
  m.e[X] = ex(-1);
  Vec psi = f.generator("psi");
  CHECK(vertex_matrix_element(*f.YV, vac, psi, psi)->coeff(m) == Scalar::one());
  Model b = build_model(boson1_desc());
  Vec h = b.generator("h");
  m.e[X] = ex(-2);
  CHECK(vertex_matrix_element(*b.YV, Vec::basis(b.V->vacuum()), h, h)->coeff(m) == Scalar::one());
}

TEST_CASE("weak commutativity orders") {
  Model f = build_model(free_fermion_desc());
  Vec vac = Vec::basis(f.V->vacuum());
  Vec psi = f.generator("psi");
  CHECK(weak_commutativity_order(*f.YV, psi, psi) == 1);
  CHECK(weak_commutativity_order(*f.YV, vac, psi) == 0);
  // odd total weight. Y(psi,x) = sum psi(n) x^{-n-1/2}, and
  // psi(3/2) psi(-3/2)psi(-1/2)vac = psi(-1/2)vac sits at x^{-2}
  CHECK(weak_commutativity_order(*f.YV, psi, f.word("psi(-3/2)psi(-1/2)")) == 2);
  // Y(psi(-3/2)vac,x) = d/dx Y(psi,x): -psi(1/2) x^{-2} on psi
  CHECK(weak_commutativity_order(*f.YV, f.word("psi(-3/2)"), psi) == 2);
  Model b = build_model(boson1_desc());
  Vec h = b.generator("h");
  CHECK(weak_commutativity_order(*b.YV, h, h) == 2);
  // omega with itself: the x^{-4} central term
  CHECK(weak_commutativity_order(*b.YV, b.omega, b.omega) == 4);
}

TEST_CASE("weak commutativity on V") {
  Model f = build_model(free_fermion_desc());
  Vec vac = Vec::basis(f.V->vacuum());
  Vec psi = f.generator("psi");
  require_pass(check_weak_commutativity_V(*f.YV, psi, psi, vac, 6));
  require_pass(check_weak_commutativity_V(*f.YV, vac, psi, psi, 4));
  Model b = build_model(boson1_desc());
  Vec h = b.generator("h");
  require_pass(check_weak_commutativity_V(*b.YV, h, b.word("h(-1)h(-1)"), Vec::basis(b.V->vacuum()), 5));
}
