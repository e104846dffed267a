#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "twistvo/scalar.hpp"

namespace twistvo {

// Sparse vector over Scalar, keyed by basis index of whatever space it lives in.
class Vec {
 public:
  using Entry = std::pair<uint32_t, Scalar>;

  Vec() = default;
  static Vec basis(uint32_t i, Scalar c = Scalar::one()) {
    Vec v;
    if (!c.is_zero()) v.e_.push_back({i, std::move(c)});
    return v;
  }

  bool is_zero() const { return e_.empty(); }
  size_t size() const { return e_.size(); }
  const std::vector<Entry>& entries() const { return e_; }
  Scalar at(uint32_t i) const;

  void add(uint32_t i, const Scalar& c);
  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(const Scalar& s);
  Vec operator-() const;
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(const Scalar& s, Vec v) { return v *= s; }
  friend Vec operator*(Vec v, const Scalar& s) { return v *= s; }
  friend bool operator==(const Vec& a, const Vec& b);

  // apply f to each basis component and sum
  template <class F>
  Vec map(F&& f) const {
    Vec out;
    for (auto& [i, c] : e_) {
      Vec r = f(i);
      r *= c;
      out += r;
    }
    return out;
  }

 private:
  std::vector<Entry> e_;  // sorted by index, no zeros
};

using LinearMap = std::function<Vec(const Vec&)>;

}  // namespace twistvo
