#include <sstream>

#include "doctest.h"
#include "twistvo/model.hpp"

using namespace twistvo;

namespace {

Exponent ex(long n, long d = 1) { return Exponent::frac(n, d); }

std::string model_path(const std::string& name) { return std::string(TWISTVO_MODEL_DIR) + "/" + name + ".model"; }

// Bernoulli polynomial B2 and the Hurwitz value zeta(-1, a) = -B2(a)/2
Q zeta_minus_one(const Q& a) { return Q(-(a * a - a + Q(1, 6)) / 2); }

// Ground-state shift of one real free field whose twisted modes sit in a + Z,
// relative to the untwisted sector: the zeta-regularized zero-point energy.
Q twisted_ground_shift(const Q& untwisted_a, const Q& twisted_a, bool fermion) {
  auto zp = [&](const Q& a) -> Q { return (a == 0 ? zeta_minus_one(Q(1)) : zeta_minus_one(a)) / 2; };
  Q d = zp(twisted_a) - zp(untwisted_a);
  return fermion ? -d : d;
}

}  // namespace

TEST_CASE("shipped model files match the built-in descriptions") {
  for (auto [file, desc] : {std::pair{"fermion", free_fermion_desc()}, {"boson1", boson1_desc()}, {"heis3-unipotent", heis3_unipotent_desc()}}) {
    ModelDesc d = load_model(model_path(file));
    CHECK(serialize_model(d) == serialize_model(desc));
    // and serialization round-trips
    std::istringstream in(serialize_model(d));
    CHECK(serialize_model(parse_model(in)) == serialize_model(d));
  }
}

TEST_CASE("scalar parsing") {
  CHECK(parse_scalar("-1/2") == Scalar(make_q(-1, 2)));
  CHECK(parse_scalar("1/sqrt2") * parse_scalar("sqrt2") == Scalar::one());
  CHECK(parse_scalar("e(1/2)*e(1/2)") == Scalar(-1));
  CHECK_THROWS_AS(parse_scalar("e(1/3)"), ModelParseError);
  CHECK_THROWS_AS(parse_scalar("foo"), ModelParseError);
}

TEST_CASE("parse errors carry the line number") {
  std::istringstream in("name x\nkind fermion\nbogus 1\n");
  try {
    parse_model(in);
    FAIL("no error");
  } catch (const ModelParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("PBW dimensions") {
  Model f = build_model(free_fermion_desc());
  CHECK(f.V->basis_at(ex(1, 2)).size() == 1);
  CHECK(f.V->basis_at(ex(2)).size() == 1);
  CHECK(f.V->parity_of(f.word("psi(-3/2)psi(-1/2)")) == 0);
  Model b = build_model(boson1_desc());
  CHECK(b.V->basis_at(ex(2)).size() == 2);
  // partitions of 4 and 5
  CHECK(b.V->basis_at(ex(4)).size() == 5);
  CHECK(b.V->basis_at(ex(5)).size() == 7);
}

TEST_CASE("two-point functions of the generators") {
  Model f = build_model(free_fermion_desc());
  Vec vac = Vec::basis(f.V->vacuum());
  Vec psi = f.generator("psi");
  CHECK(f.YV->coeff(psi, ex(-1), psi) == vac);
  CHECK(f.YV->coeff(psi, ex(-2), psi).is_zero());
  Model b = build_model(boson1_desc());
  Vec h = b.generator("h");
  CHECK(b.YV->coeff(h, ex(-2), h) == Vec::basis(b.V->vacuum()));
  CHECK(b.YV->coeff(h, ex(-1), h).is_zero());
}

TEST_CASE("central charge surrogate") {
  // <1', Y(omega,x) omega> = (c/2) x^{-4}
  Model f = build_model(free_fermion_desc());
  CHECK(f.YV->coeff(f.omega, ex(-4), f.omega) == Vec::basis(f.V->vacuum(), Scalar(make_q(1, 4))));
  Model b = build_model(boson1_desc());
  CHECK(b.YV->coeff(b.omega, ex(-4), b.omega) == Vec::basis(b.V->vacuum(), Scalar(make_q(1, 2))));
  Model h = build_model(heis3_unipotent_desc());
  CHECK(h.YV->coeff(h.omega, ex(-4), h.omega) == Vec::basis(h.V->vacuum(), Scalar(make_q(3, 2))));
}

TEST_CASE("twisted vacuum weights come out of the extension") {
  Model f = build_model(free_fermion_desc());
  Model b = build_model(boson1_desc());
  Q ramond = twisted_ground_shift(Q(1, 2), Q(0), true);
  Q z2 = twisted_ground_shift(Q(0), Q(1, 2), false);
  CHECK(ramond == Q(1, 16));
  CHECK(z2 == Q(1, 16));
  CHECK(f.module->vacuum_weight() == Exponent(ramond));
  CHECK(b.module->vacuum_weight() == Exponent(z2));
}

TEST_CASE("twisted generator fields on the vacuum") {
  Model f = build_model(free_fermion_desc());
  const auto& W = f.module->W();
  Vec vp = Vec::basis(W.vacuum(0)), vm = Vec::basis(W.vacuum(1));
  Vec psi = f.generator("psi");
  CHECK(f.module->coeff(psi, ex(-1, 2), 0, vp) == vm * Scalar::inv_sqrt2());
  Model b = build_model(boson1_desc());
  Vec vac = Vec::basis(b.module->W().vacuum());
  Vec h = b.generator("h");
  for (long n = -4; n <= 4; ++n) {
    Vec c = b.module->coeff(h, ex(2 * n - 1, 2), 0, vac);
    // only creation modes survive: levels above the vacuum
    for (auto& [id, s] : c.entries()) CHECK(b.module->W().level(id) > Exponent(0));
  }
}

TEST_CASE("derivation from generators agrees with the Jordan data") {
  BuildOptions opt;
  opt.jordan_cutoff = ex(3);
  Model m = build_model(heis3_unipotent_desc(), opt);
  REQUIRE(m.N);
  for (auto id : m.V->basis_upto(ex(3))) {
    Vec v = Vec::basis(id);
    CHECK(m.N(v) == m.jordan->apply_N(v));
  }
}

TEST_CASE("mutations apply cleanly") {
  for (auto& mu : mutation_catalog()) {
    ModelDesc base = mu.model == "fermion" ? free_fermion_desc() : mu.model == "boson1" ? boson1_desc() : heis3_unipotent_desc();
    EngineFaults f;
    ModelDesc d = apply_mutation(base, mu.id, &f);
    bool changed = serialize_model(d) != serialize_model(base) || f.flip_iterate_sign || f.drop_twist_sign || f.twist_conjugate_branch ||
                   f.twist_negative_translation;
    CHECK_MESSAGE(changed, mu.id);
    BuildOptions opt;
    opt.require_isometry = false;
    opt.faults = f;
    CHECK_NOTHROW(build_model(d, opt));
  }
  CHECK(mutation_catalog().size() >= 10);
}
