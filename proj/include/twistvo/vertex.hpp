#pragma once

#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "twistvo/fock.hpp"

namespace twistvo {

// Vertex operators of the algebra V acting on a Fock module W, where each
// generator a has g-weight alpha_a (alpha = 0 everywhere gives V on itself).
//
// Generators act by their twisted modes a_(p), p in alpha_a + Z, which are the
// physical modes a(p + 1 - wt a). Composite states u = a_(k) v are handled by
// the x1-residue of the twisted Jacobi identity, so every field is determined
// by the generators alone.
class VertexEngine {
 public:
  VertexEngine(std::shared_ptr<const FockSpace> V, std::shared_ptr<const FockSpace> W, std::vector<Exponent> alpha,
               bool flip_iterate_sign = false);

  const FockSpace& algebra() const { return *V_; }
  const FockSpace& module() const { return *W_; }
  std::shared_ptr<const FockSpace> algebra_ptr() const { return V_; }
  std::shared_ptr<const FockSpace> module_ptr() const { return W_; }
  const std::vector<Exponent>& generator_alpha() const { return alpha_; }

  // g-weight of a PBW state of V, the sum of its generators' weights mod 1
  Exponent alpha_of(uint32_t u) const;

  // Coefficient of x^e in Y(u, x) w.
  Vec coeff(uint32_t u, Exponent e, uint32_t w) const;
  Vec coeff(const Vec& u, Exponent e, const Vec& w) const;
  // u_(p) w, the coefficient of x^{-p-1}
  Vec mode(const Vec& u, Exponent p, const Vec& w) const { return coeff(u, -p - Exponent(1), w); }

  // twisted generator mode a_(p)
  Vec gen_mode(int a, Exponent p, const Vec& w) const;

  // Smallest e with Y(u,x)w possibly nonzero at x^e: from level(out) >= 0.
  Exponent lowest_exponent(uint32_t u, uint32_t w) const { return -(W_->level(w) + V_->level(u)); }

 private:
  Vec compute(uint32_t u, Exponent e, uint32_t w) const;
  Vec residue_term(int a, Exponent alpha, long K, Exponent e, uint32_t v, uint32_t w, int eps) const;

  struct Key {
    uint32_t u, w;
    int64_t e;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const noexcept {
      return (size_t(k.u) * 0x9E3779B97F4A7C15ull) ^ (size_t(k.w) * 0xC2B2AE3D27D4EB4Full) ^ size_t(k.e);
    }
  };

  std::shared_ptr<const FockSpace> V_, W_;
  std::vector<Exponent> alpha_;
  bool flip_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<Key, Vec, KeyHash> memo_;
};

}  // namespace twistvo
