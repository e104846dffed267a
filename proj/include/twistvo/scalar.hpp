#pragma once

#include <string>
#include <vector>

#include "twistvo/exponent.hpp"
#include "twistvo/rational.hpp"

namespace twistvo {

// Finite sum  sum c * Pi^p * e^{pi i k / kPhaseDen}  with Pi standing for pi*i.
// Phases are kept in [0, 1) by folding e^{pi i} = -1, which makes the terms
// the power basis of Q(zeta_{2 kPhaseDen}) and the representation canonical.
class Scalar {
 public:
  static constexpr int kPhaseDen = 64;

  struct Term {
    int pi = 0;     // power of Pi, may be negative
    int phase = 0;  // k in [0, kPhaseDen)
    Q c;
  };

  Scalar() = default;
  Scalar(long v);
  Scalar(int v) : Scalar(long(v)) {}
  Scalar(const Q& q);

  static Scalar zero() { return {}; }
  static Scalar one() { return Scalar(1L); }
  // e^{pi i q}; q must be a multiple of 1/kPhaseDen
  static Scalar expi(const Q& q);
  static Scalar expi(Exponent q);
  // Pi^p
  static Scalar pi_pow(int p);
  static Scalar sqrt2();
  static Scalar inv_sqrt2();

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  Q rational() const;  // throws unless is_rational()
  const std::vector<Term>& terms() const { return terms_; }
  int max_pi() const;
  int min_pi() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator*=(const Q& q);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator*(Scalar a, const Q& q) { return a *= q; }
  friend Scalar operator*(const Q& q, Scalar a) { return a *= q; }
  friend bool operator==(const Scalar& a, const Scalar& b);

  // Complex conjugation of the cyclotomic part (Pi is sent to -Pi).
  Scalar conj() const;
  // zeta -> zeta^k on the cyclotomic part, k odd; Pi untouched.
  Scalar galois(int k) const;
  // Exact inverse. Needs all terms to share one power of Pi.
  Scalar inverse() const;

  // Deterministic display. Recognizes r * e^{pi i q} * 2^{+-1/2} shapes.
  std::string str() const;
  // Canonical term listing used for serialization.
  std::string canonical_str() const;

  size_t hash() const;

 private:
  void add_term(int pi, int phase, const Q& c);
  std::vector<Term> terms_;  // sorted by (pi, phase), no zero coefficients
};

}  // namespace twistvo
