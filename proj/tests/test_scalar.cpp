#include <random>

#include "doctest.h"
#include "twistvo/linalg.hpp"
#include "twistvo/scalar.hpp"

using namespace twistvo;

namespace {

Exponent ex(long n, long d = 1) { return Exponent::frac(n, d); }

// random element of the coefficient field, optionally mixing powers of Pi
Scalar random_scalar(std::mt19937& rng, bool mix_pi) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4), phase(0, 2 * Scalar::kPhaseDen - 1), pis(-2, 2), terms(1, 3);
  Scalar s;
  int n = terms(rng);
  for (int i = 0; i < n; ++i) {
    Scalar t = Scalar(make_q(num(rng), den(rng))) * Scalar::expi(make_q(phase(rng), Scalar::kPhaseDen));
    if (mix_pi) t = t * Scalar::pi_pow(pis(rng));
    s += t;
  }
  return s;
}

}  // namespace

TEST_CASE("exponent arithmetic") {
  CHECK(ex(-1, 2).floor() == -1);
  CHECK(ex(-1, 2).ceil() == 0);
  CHECK(ex(7, 2).floor() == 3);
  CHECK(ex(-7, 4).residue() == ex(1, 4));
  CHECK(ex(3).residue() == ex(0));
  CHECK(ex(1, 2) + ex(1, 2) == ex(1));
  CHECK(ex(-3, 2).str() == "-3/2");
  CHECK(ex(4).str() == "4");
  CHECK(ex(5, 2).to_q() == make_q(5, 2));
  CHECK_THROWS(ex(1, 3));  // not a multiple of 1/128
  CHECK_THROWS(ex(1, 2).to_long());
}

TEST_CASE("roots of unity fold to a canonical form") {
  CHECK(Scalar::expi(make_q(1)) == Scalar(-1L));
  CHECK(Scalar::expi(make_q(2)) == Scalar::one());
  CHECK(Scalar::expi(make_q(1, 2)) * Scalar::expi(make_q(1, 2)) == Scalar(-1L));
  CHECK(Scalar::expi(make_q(-1, 2)) == Scalar::expi(make_q(3, 2)));
  CHECK(Scalar::sqrt2() * Scalar::sqrt2() == Scalar(2L));
  CHECK(Scalar::sqrt2() * Scalar::inv_sqrt2() == Scalar::one());
  // sqrt 2 = e^{pi i/4} + e^{-pi i/4}
  CHECK(Scalar::sqrt2() == Scalar::expi(make_q(1, 4)) + Scalar::expi(make_q(-1, 4)));
  CHECK(Scalar::pi_pow(2) * Scalar::pi_pow(-2) == Scalar::one());
  // only 128th roots of unity are representable
  CHECK_THROWS(Scalar::expi(make_q(1, 3)));
}

TEST_CASE("scalar display") {
  CHECK((Scalar::expi(make_q(-1, 2)) * Scalar::inv_sqrt2()).str() == "e^{-πi/2}·2^{-1/2}");
  CHECK(Scalar(make_q(-3, 4)).str() == "-3/4");
  CHECK(Scalar::pi_pow(1).str() == "Π");
  CHECK(Scalar::zero().str() == "0");
}

TEST_CASE("field axioms on random scalars") {
  std::mt19937 rng(20240611);
  for (int it = 0; it < 200; ++it) {
    Scalar a = random_scalar(rng, true), b = random_scalar(rng, true), c = random_scalar(rng, true);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * b == b * a);
    CHECK((a - a).is_zero());
    CHECK((a * b).conj() == a.conj() * b.conj());
    CHECK((a + b).galois(3) == a.galois(3) + b.galois(3));
    CHECK((a * b).galois(5) == a.galois(5) * b.galois(5));
  }
}

TEST_CASE("inverse on random scalars with one power of Pi") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pis(-3, 3);
  for (int it = 0; it < 100; ++it) {
    Scalar a = random_scalar(rng, false) * Scalar::pi_pow(pis(rng));
    if (a.is_zero()) continue;
    CHECK(a * a.inverse() == Scalar::one());
  }
  CHECK_THROWS(Scalar::zero().inverse());
  CHECK_THROWS((Scalar::one() + Scalar::pi_pow(1)).inverse());
}

TEST_CASE("nilpotent exponential and logarithm are inverse") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-4, 4);
  for (int it = 0; it < 50; ++it) {
    size_t n = 1 + it % 4;
    Matrix N(n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) N(i, j) = Scalar(long(num(rng)));
    Matrix E = exp_nilpotent(N);
    CHECK(log_unipotent(E - Matrix::identity(n)) == N);
    // exp(N) exp(-N) = 1
    CHECK(E * exp_nilpotent(N * Scalar(-1L)) == Matrix::identity(n));
    CHECK(nilpotency_index(N) <= int(n));
  }
  Matrix J(2, 2);
  J(0, 0) = Scalar(1L);
  CHECK_THROWS_AS(exp_nilpotent(J), NotNilpotent);
  CHECK(nilpotency_index(J) == 0);
}

TEST_CASE("kernel and inverse") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> num(-3, 3);
  for (int it = 0; it < 50; ++it) {
    Matrix A(3, 4);
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 4; ++j) A(i, j) = Scalar(long(num(rng))) * Scalar::expi(make_q(num(rng), 4));
    Matrix K = kernel(A);
    CHECK(rank(A) + K.cols() == 4);
    CHECK((A * K).is_zero());
    Matrix S(3, 3);
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) S(i, j) = A(i, j);
    if (rank(S) == 3) CHECK(S * inverse(S) == Matrix::identity(3));
  }
}
