#pragma once

#include <cstdint>
#include <deque>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "twistvo/exponent.hpp"
#include "twistvo/linalg.hpp"
#include "twistvo/vec.hpp"

namespace twistvo {

struct Generator {
  std::string name;
  int parity = 0;
  Exponent weight;
};

// Physical mode a(n): lowers the level by n.
struct Mode {
  uint16_t gen = 0;
  Exponent n;
  friend bool operator==(const Mode&, const Mode&) = default;
};

// PBW monomial: creation modes sorted by (n, gen) applied to a vacuum vector.
struct FockState {
  std::vector<Mode> modes;
  uint32_t vac = 0;
  friend bool operator==(const FockState&, const FockState&) = default;
};

// Free-field mode algebra: [a(m), b(n)] = G_ab f_a(m) delta_{m+n,0} with
// f = 1 for odd generators and f(m) = m for even ones, plus a finite vacuum
// space carrying the zero modes.
struct FockSpec {
  std::vector<Generator> gens;
  Matrix gram;
  std::vector<Exponent> coset;  // residue of the allowed physical modes per generator
  std::vector<std::string> vac_names{"vac"};
  std::vector<int> vac_parity{0};
  std::vector<Matrix> zero_modes;  // per generator; only read when its coset is 0
};

class FockSpace {
 public:
  explicit FockSpace(FockSpec spec);

  const FockSpec& spec() const { return spec_; }
  size_t num_generators() const { return spec_.gens.size(); }
  const Generator& generator(int a) const { return spec_.gens[a]; }

  uint32_t intern(const FockState& s) const;
  FockState state(uint32_t id) const;
  Exponent level(uint32_t id) const;
  int parity(uint32_t id) const;
  std::string name(uint32_t id) const;

  uint32_t vacuum(uint32_t j = 0) const { return intern(FockState{{}, j}); }
  // a(-d)|vac>, the state of the generator itself
  uint32_t generator_state(int a) const;

  bool mode_allowed(int a, Exponent n) const { return (n - spec_.coset[a]).is_integer(); }
  Vec apply(int a, Exponent n, uint32_t s) const;
  Vec apply(int a, Exponent n, const Vec& v) const;

  // PBW basis ordered by (level, mode sequence, vacuum index)
  std::vector<uint32_t> basis_at(Exponent level) const;
  std::vector<uint32_t> basis_upto(Exponent max_level) const;
  // all levels that occur up to max_level, ascending
  std::vector<Exponent> levels_upto(Exponent max_level) const;

  // Parity of a homogeneous vector; -1 when mixed or zero.
  int parity_of(const Vec& v) const;

 private:
  struct Key {
    std::vector<int64_t> k;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const noexcept {
      size_t h = 1469598103934665603ull;
      for (auto x : k.k) h = (h ^ size_t(x)) * 1099511628211ull;
      return h;
    }
  };
  static Key key_of(const FockState& s);
  struct Info {
    FockState st;
    Exponent level;
    int parity;
  };

  FockSpec spec_;
  mutable std::shared_mutex mu_;
  mutable std::deque<Info> states_;
  mutable std::unordered_map<Key, uint32_t, KeyHash> ids_;
};

}  // namespace twistvo
