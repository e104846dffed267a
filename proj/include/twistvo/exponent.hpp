#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

#include "twistvo/rational.hpp"

namespace twistvo {

// Exact rational exponent with denominator dividing kDen. Every weight
// (1/2 Z) and every g-weight produced by a supported cyclotomic level fits.
class Exponent {
 public:
  static constexpr int64_t kDen = 128;

  constexpr Exponent() = default;
  constexpr Exponent(int v) : n_(int64_t(v) * kDen) {}
  constexpr Exponent(long v) : n_(int64_t(v) * kDen) {}
  constexpr Exponent(long long v) : n_(int64_t(v) * kDen) {}
  explicit Exponent(const Q& q);

  static constexpr Exponent from_raw(int64_t raw) {
    Exponent e;
    e.n_ = raw;
    return e;
  }
  static Exponent frac(long num, long den);

  constexpr int64_t raw() const { return n_; }
  Q to_q() const;
  std::string str() const;

  bool is_integer() const { return n_ % kDen == 0; }
  long to_long() const;  // throws unless integral
  // floor and ceil as integers
  long floor() const;
  long ceil() const;
  // representative of e mod 1 in [0, 1)
  Exponent residue() const;

  constexpr Exponent operator-() const { return from_raw(-n_); }
  constexpr Exponent& operator+=(Exponent o) {
    n_ += o.n_;
    return *this;
  }
  constexpr Exponent& operator-=(Exponent o) {
    n_ -= o.n_;
    return *this;
  }
  friend constexpr Exponent operator+(Exponent a, Exponent b) { return from_raw(a.n_ + b.n_); }
  friend constexpr Exponent operator-(Exponent a, Exponent b) { return from_raw(a.n_ - b.n_); }
  friend constexpr Exponent operator*(long k, Exponent a) { return from_raw(int64_t(k) * a.n_); }
  friend constexpr bool operator==(Exponent a, Exponent b) = default;
  friend constexpr auto operator<=>(Exponent a, Exponent b) = default;

 private:
  int64_t n_ = 0;
};

}  // namespace twistvo

template <>
struct std::hash<twistvo::Exponent> {
  size_t operator()(twistvo::Exponent e) const noexcept { return std::hash<int64_t>()(e.raw()); }
};
