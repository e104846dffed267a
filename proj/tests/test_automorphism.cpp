#include <array>

#include "doctest.h"
#include "twistvo/automorphism.hpp"
#include "twistvo/model.hpp"

using namespace twistvo;

namespace {

Exponent ex(long n, long d = 1) { return Exponent::frac(n, d); }

// plain rational 3x3 arithmetic, kept apart from Matrix so it can serve as
// an oracle for the unipotent example
using M3 = std::array<std::array<Q, 3>, 3>;

M3 mul(const M3& x, const M3& y) {
  M3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += x[i][k] * y[k][j];
  return r;
}
M3 transpose(const M3& x) {
  M3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = x[j][i];
  return r;
}
M3 lin(const M3& x, Q s, const M3& y) {
  M3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = x[i][j] + s * y[i][j];
  return r;
}
M3 unit() {
  M3 r{};
  for (int i = 0; i < 3; ++i) r[i][i] = 1;
  return r;
}
bool is_zero(const M3& x) {
  for (auto& row : x)
    for (auto& v : row)
      if (v != 0) return false;
  return true;
}

void require_pass(const CheckResult& r) {
  if (r) FAIL_CHECK(r->what << " " << r->where);
  CHECK(!r);
}

}  // namespace

TEST_CASE("unipotent example against a hand computation") {
  // order a, b, c; column j is g applied to generator j
  M3 g{};
  g[0] = {1, Q(-1, 2), 1};
  g[1] = {0, 1, 0};
  g[2] = {0, -1, 1};
  M3 G{};
  G[0][1] = G[1][0] = G[2][2] = 1;
  CHECK(mul(transpose(g), mul(G, g)) == G);
  M3 m = lin(g, -1, unit());
  M3 m2 = mul(m, m);
  CHECK(!is_zero(m2));
  CHECK(is_zero(mul(m2, m)));
  // log(1+m) truncates after the square term
  M3 n = lin(m, Q(-1, 2), m2);
  CHECK(lin(lin(unit(), 1, n), Q(1, 2), mul(n, n)) == g);

  Model h = build_model(heis3_unipotent_desc());
  const Matrix& gg = h.g->on_generators();
  REQUIRE(gg.rows() == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(gg(i, j) == Scalar(g[i][j]));

  JordanDecomposition J = jordan_decompose(*h.g, ex(1));
  const char* names[] = {"a", "b", "c"};
  for (int j = 0; j < 3; ++j) {
    Vec expect;
    for (int i = 0; i < 3; ++i) expect += h.generator(names[i]) * Scalar(n[i][j]);
    CHECK(J.apply_two_pi_i_N(h.generator(names[j])) == expect);
  }
  CHECK(J.spectrum == std::vector<Exponent>{ex(0)});
}

TEST_CASE("parity and identity spectra") {
  Model f = build_model(free_fermion_desc());
  JordanDecomposition Jf = jordan_decompose(*f.g, ex(2));
  CHECK(Jf.spectrum == std::vector<Exponent>{ex(0), ex(1, 2)});
  CHECK(Jf.nilpotent_part_is_zero());
  CHECK(semisimple_nilpotent_commute(Jf));
  // the two-fermion state is even
  auto parts = Jf.alpha_decompose(f.word("psi(-3/2)psi(-1/2)"));
  CHECK(parts.size() == 1);
  CHECK(parts.count(ex(0)) == 1);

  Model b = build_model(heisenberg_desc({"h"}, {{Q(1)}}));
  JordanDecomposition Jb = jordan_decompose(*b.g, ex(3));
  CHECK(Jb.spectrum == std::vector<Exponent>{ex(0)});
  CHECK(Jb.nilpotent_part_is_zero());
}

TEST_CASE("alpha from roots of unity") {
  for (long k = 0; k < 128; k += 7) CHECK(alpha_of_root(root_of_unity(Exponent::frac(k, 128))) == Exponent::frac(k, 128));
  CHECK(alpha_of_root(Scalar(-1L)) == ex(1, 2));
  CHECK_THROWS_AS(alpha_of_root(Scalar(2L)), NonCyclotomicSpectrum);
  Matrix bad(1, 1);
  bad(0, 0) = Scalar(3L);
  CHECK_THROWS(spectrum_candidates(bad));
}

TEST_CASE("projectors split every block") {
  Model h = build_model(heis3_unipotent_desc());
  Model f = build_model(free_fermion_desc());
  for (const Model* m : {&h, &f}) {
    JordanDecomposition J = jordan_decompose(*m->g, ex(3));
    for (const JordanBlock& b : J.blocks) {
      size_t n = b.basis.size();
      Matrix sum(n, n);
      for (auto& [a, p] : b.projector) {
        CHECK(p * p == p);
        // S acts on the alpha part by e^{2 pi i alpha}
        CHECK(b.semisimple * p == p * root_of_unity(a));
        sum = sum + p;
      }
      CHECK(sum == Matrix::identity(n));
      CHECK(b.semisimple * b.two_pi_i_N == b.two_pi_i_N * b.semisimple);
    }
  }
}

TEST_CASE("N is a derivation and x^N conjugates the vertex operator") {
  Model h = build_model(heis3_unipotent_desc());
  JordanDecomposition J = jordan_decompose(*h.g, ex(3));
  require_pass(check_derivation(*h.YV, J, ex(2), 4));
  require_pass(check_conjugation(*h.YV, J, ex(2), 4));
}
