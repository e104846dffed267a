#include "doctest.h"
#include "twistvo/model.hpp"
#include "twistvo/twist_operator.hpp"

using namespace twistvo;

namespace {

Exponent ex(long n, long d = 1) { return Exponent::frac(n, d); }

struct Fixture {
  Model m;
  TwistOperator T;
  explicit Fixture(const ModelDesc& d, const BuildOptions& o = {}) : m(build_model(d, o)), T(*m.module) {}
  Vec wvac(uint32_t j = 0) const { return Vec::basis(m.module->W().vacuum(j)); }
  Vec vac() const { return Vec::basis(m.V->vacuum()); }
  Vec w(const std::string& word, uint32_t j = 0) const { return apply_word(m.module->W(), word, wvac(j)); }
};

const Fixture& ramond() {
  static Fixture f(free_fermion_desc());
  return f;
}
const Fixture& z2() {
  static Fixture f(boson1_desc());
  return f;
}

void require_pass(const CheckResult& r) {
  if (r) FAIL_CHECK(r->what << " " << r->where);
}

}  // namespace

TEST_CASE("twist operator leading term on the Ramond vacuum") {
  const auto& R = ramond();
  Vec psi = R.m.generator("psi");
  // Clifford oracle: psi_0 v+ = 2^{-1/2} v-, and y^{-1/2} -> e^{-pi i/2} x^{-1/2}
  Vec lead = R.T.coeff(R.wvac(0), ex(-1, 2), 0, psi);
  CHECK(lead == R.wvac(1) * (Scalar::expi(Q(-1, 2)) * Scalar::inv_sqrt2()));
  // nothing below it
  CHECK(R.T.coeff(R.wvac(0), ex(-3, 2), 0, psi).is_zero());
  // parity: |Ytw(w,x)v| = |v| + |w|
  for (long n = -1; n <= 3; ++n) {
    Vec c = R.T.coeff(R.wvac(1), ex(2 * n - 1, 2), 0, psi);
    if (!c.is_zero()) CHECK(R.m.module->W().parity_of(c) == 0);
  }
}

TEST_CASE("twist commutativity order") {
  const auto& R = ramond();
  Vec psi = R.m.generator("psi");
  CHECK(R.T.commutativity_order(R.vac(), R.wvac()) == 0);
  CHECK(R.T.commutativity_order(psi, R.wvac()) == 0);
  // {psi_1, psi_{-1}} = 1, so the lowest term of Y(psi,x) psi_{-1}v+ is x^{-3/2} v+
  CHECK(R.T.commutativity_order(psi, R.w("psi(-1)")) == 1);
  const auto& Z = z2();
  // h_{1/2} h_{-1/2} vac = 1/2 vac sits at x^{-3/2}
  CHECK(Z.T.commutativity_order(Z.m.generator("h"), Z.w("h(-1/2)")) == 1);
}

TEST_CASE("vacuum argument gives the translation") {
  for (const Fixture* f : {&ramond(), &z2()}) {
    const auto& W = f->m.module->W();
    for (uint32_t id : W.basis_upto(ex(5, 2))) require_pass(check_twist_vacuum(f->T, Vec::basis(id), 5));
  }
}

TEST_CASE("weak associativity with the twist operator") {
  const auto& R = ramond();
  Vec psi = R.m.generator("psi");
  require_pass(check_weak_associativity(R.T, psi, psi, R.wvac(), 4));
  require_pass(check_weak_associativity(R.T, R.vac(), psi, R.wvac(1), 3));
  const auto& Z = z2();
  Vec h = Z.m.generator("h");
  require_pass(check_weak_associativity(Z.T, h, h, Z.wvac(), 4));
}

TEST_CASE("Jacobi identity for the twist operator") {
  const auto& R = ramond();
  Vec psi = R.m.generator("psi");
  require_pass(check_twist_jacobi(R.T, psi, psi, R.wvac(), 3));
  require_pass(check_twist_jacobi(R.T, psi, psi, R.wvac(1), 3));
  require_pass(check_twist_jacobi(R.T, R.vac(), R.vac(), R.wvac(), 3));
  const auto& Z = z2();
  Vec h = Z.m.generator("h");
  require_pass(check_twist_jacobi(Z.T, h, Z.m.word("h(-1)"), Z.wvac(), 3));
}

TEST_CASE("generalized commutator and weak commutativity") {
  const auto& R = ramond();
  Vec psi = R.m.generator("psi");
  require_pass(check_gen_commutator(R.T, psi, psi, R.wvac(), 4));
  require_pass(check_gen_commutator(R.T, psi, psi, R.w("psi(-1)"), 3));
  require_pass(check_gen_commutator(R.T, R.vac(), psi, R.wvac(), 3));
  require_pass(check_gen_weak_commutativity(R.T, psi, psi, R.wvac(), 4));
  const auto& Z = z2();
  Vec h = Z.m.generator("h");
  require_pass(check_gen_commutator(Z.T, h, h, Z.wvac(), 4));
  require_pass(check_gen_weak_commutativity(Z.T, h, h, Z.wvac(), 4));
}

TEST_CASE("twist decomposition") {
  const auto& R = ramond();
  require_pass(check_twist_decomposition(R.T, R.wvac(), R.m.generator("psi"), 4));
  require_pass(check_twist_decomposition(R.T, R.wvac(), R.vac(), 4));
  Model h3 = build_model(heis3_unipotent_desc());
  TwistOperator T(*h3.toy);
  Vec vac = Vec::basis(h3.V->vacuum());
  for (const char* word : {"b(-1)", "c(-1)", "a(-1)b(-1)"}) {
    require_pass(check_twist_decomposition(T, vac, h3.word(word), 3));
    require_pass(check_twist_decomposition(T, h3.word(word), h3.generator("b"), 3));
  }
  // the toy twist field really carries logs before x^N is applied
  Monomial m;
  m.k[X] = 1;
  CHECK_FALSE(T.field(vac, h3.generator("b"), X)->coeff(m).is_zero());
}

TEST_CASE("L(-1) properties of the twist operator") {
  const auto& R = ramond();
  require_pass(check_L_minus1_twist(R.T, R.wvac(), R.vac(), 4));
  require_pass(check_L_minus1_twist(R.T, R.wvac(), R.m.generator("psi"), 4));
  const auto& Z = z2();
  require_pass(check_L_minus1_twist(Z.T, Z.wvac(), Z.m.word("h(-1)"), 4));
}

TEST_CASE("mixed products and permutations") {
  const auto& R = ramond();
  Vec psi = R.m.generator("psi");
  require_pass(check_mixed_product(R.T, {}, R.wvac(), {}, psi, 5));
  require_pass(check_mixed_product(R.T, {psi}, R.wvac(), {}, psi, 4));
  const auto& Z = z2();
  Vec h = Z.m.generator("h");
  require_pass(check_mixed_product(Z.T, {h}, Z.wvac(), {h}, Z.vac(), 3));
  require_pass(check_mixed_product(Z.T, {}, Z.wvac(), {h, h}, Z.vac(), 3));

  require_pass(check_mixed_permutation(R.T, {psi}, R.wvac(), {}, psi, 0, 4));
  require_pass(check_mixed_permutation(R.T, {}, R.wvac(), {psi}, psi, 0, 4));
  require_pass(check_mixed_permutation(R.T, {psi, psi}, R.wvac(), {}, R.vac(), 0, 3));
  require_pass(check_mixed_permutation(Z.T, {h}, Z.wvac(), {h}, Z.vac(), 1, 3));
  // the twist operator in the middle: both kernel variables are unbounded
  // for the generic product
  require_pass(check_mixed_permutation(R.T, {psi}, R.wvac(), {R.vac()}, R.vac(), 0, 3));
  require_pass(check_mixed_permutation(R.T, {}, R.wvac(), {psi, psi}, R.vac(), 0, 3));
  require_pass(check_mixed_permutation(Z.T, {h}, Z.wvac(), {h}, Z.vac(), 0, 3));
}

TEST_CASE("engine faults in the twist operator are caught") {
  for (const char* id : {"fermion.twist-sign", "boson1.twist-branch", "boson1.twist-translation"}) {
    CAPTURE(id);
    std::string model = std::string(id).substr(0, std::string(id).find('.'));
    ModelDesc base = model == "fermion" ? free_fermion_desc() : boson1_desc();
    BuildOptions o;
    ModelDesc d = apply_mutation(base, id, &o.faults);
    Fixture f(d, o);
    Vec g = f.m.generator(model == "fermion" ? "psi" : "h");
    CheckResult r = check_twist_jacobi(f.T, g, g, f.wvac(model == "fermion" ? 1 : 0), 3);
    if (!r) r = check_gen_weak_commutativity(f.T, g, g, f.wvac(model == "fermion" ? 1 : 0), 3);
    REQUIRE(r);
    CHECK(r->where.find(" at ") != std::string::npos);
  }
}
