#include "twistvo/fock.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <set>

namespace twistvo {

namespace {
bool mode_less(const Mode& x, const Mode& y) { return x.n < y.n || (x.n == y.n && x.gen < y.gen); }
}  // namespace

FockSpace::FockSpace(FockSpec spec) : spec_(std::move(spec)) {
  size_t g = spec_.gens.size();
  if (spec_.gram.rows() != g || spec_.gram.cols() != g) throw EngineError("gram matrix has the wrong shape");
  if (spec_.coset.size() != g) throw EngineError("mode cosets missing");
  if (spec_.vac_parity.size() != spec_.vac_names.size()) throw EngineError("vacuum parities missing");
  size_t dv = spec_.vac_names.size();
  spec_.zero_modes.resize(g);
  for (auto& z : spec_.zero_modes)
    if (z.rows() == 0) z = Matrix(dv, dv);
  for (size_t a = 0; a < g; ++a) spec_.coset[a] = spec_.coset[a].residue();
}

FockSpace::Key FockSpace::key_of(const FockState& s) {
  Key k;
  k.k.reserve(2 * s.modes.size() + 1);
  k.k.push_back(s.vac);
  for (auto& m : s.modes) {
    k.k.push_back(m.gen);
    k.k.push_back(m.n.raw());
  }
  return k;
}

uint32_t FockSpace::intern(const FockState& s) const {
  Key k = key_of(s);
  {
    std::shared_lock lk(mu_);
    auto it = ids_.find(k);
    if (it != ids_.end()) return it->second;
  }
  Exponent lev;
  int par = spec_.vac_parity.at(s.vac);
  for (auto& m : s.modes) {
    lev -= m.n;
    par ^= spec_.gens[m.gen].parity;
  }
  std::unique_lock lk(mu_);
  auto it = ids_.find(k);
  if (it != ids_.end()) return it->second;
  uint32_t id = uint32_t(states_.size());
  states_.push_back(Info{s, lev, par});
  ids_.emplace(std::move(k), id);
  return id;
}

FockState FockSpace::state(uint32_t id) const {
  std::shared_lock lk(mu_);
  return states_.at(id).st;
}

Exponent FockSpace::level(uint32_t id) const {
  std::shared_lock lk(mu_);
  return states_.at(id).level;
}

int FockSpace::parity(uint32_t id) const {
  std::shared_lock lk(mu_);
  return states_.at(id).parity;
}

std::string FockSpace::name(uint32_t id) const {
  FockState s = state(id);
  std::string out;
  for (auto& m : s.modes) out += spec_.gens[m.gen].name + "(" + m.n.str() + ")";
  out += spec_.vac_names[s.vac];
  return out;
}

uint32_t FockSpace::generator_state(int a) const {
  return intern(FockState{{Mode{uint16_t(a), -spec_.gens[a].weight}}, 0});
}

Vec FockSpace::apply(int a, Exponent n, uint32_t sid) const {
  if (!mode_allowed(a, n)) return {};
  FockState s = state(sid);
  const int pa = spec_.gens[a].parity;
  Mode me{uint16_t(a), n};
  if (n < Exponent(0)) {
    auto pos = std::lower_bound(s.modes.begin(), s.modes.end(), me, mode_less);
    if (pa && pos != s.modes.end() && *pos == me) return {};
    int flips = 0;
    if (pa)
      for (auto it = s.modes.begin(); it != pos; ++it) flips ^= spec_.gens[it->gen].parity;
    s.modes.insert(pos, me);
    return Vec::basis(intern(s), Scalar(flips ? -1L : 1L));
  }
  Vec out;
  int flips = 0;
  for (size_t i = 0; i < s.modes.size(); ++i) {
    const Mode& m = s.modes[i];
    if (m.n == -n) {
      Q b = spec_.gram(a, m.gen).is_zero() ? Q(0) : spec_.gram(a, m.gen).rational();
      if (!pa) b *= n.to_q();
      if (b != 0) {
        FockState r = s;
        r.modes.erase(r.modes.begin() + long(i));
        out.add(intern(r), Scalar(flips ? Q(-b) : b));
      }
    }
    if (pa) flips ^= spec_.gens[m.gen].parity;
  }
  if (n == Exponent(0)) {
    const Matrix& z = spec_.zero_modes[a];
    for (size_t k = 0; k < z.rows(); ++k) {
      const Scalar& c = z(k, s.vac);
      if (c.is_zero()) continue;
      FockState r = s;
      r.vac = uint32_t(k);
      out.add(intern(r), flips ? -c : c);
    }
  }
  return out;
}

Vec FockSpace::apply(int a, Exponent n, const Vec& v) const {
  Vec out;
  for (auto& [i, c] : v.entries()) {
    Vec t = apply(a, n, i);
    if (t.is_zero()) continue;
    t *= c;
    out += t;
  }
  return out;
}

std::vector<uint32_t> FockSpace::basis_at(Exponent level) const {
  // creation modes with -n <= level in canonical order
  std::vector<Mode> avail;
  for (size_t a = 0; a < spec_.gens.size(); ++a) {
    Exponent r = spec_.coset[a];
    // most negative first: n = r - k for integers k with 0 < -n <= level
    for (long k = 0;; ++k) {
      Exponent n = r - Exponent(k);
      if (n >= Exponent(0)) continue;
      if (-n > level) break;
      avail.push_back(Mode{uint16_t(a), n});
    }
  }
  std::sort(avail.begin(), avail.end(), mode_less);
  std::vector<FockState> found;
  std::vector<Mode> cur;
  std::function<void(size_t, Exponent)> rec = [&](size_t from, Exponent left) {
    if (left == Exponent(0)) {
      found.push_back(FockState{cur, 0});
      return;
    }
    for (size_t i = from; i < avail.size(); ++i) {
      const Mode& m = avail[i];
      if (-m.n > left) continue;
      cur.push_back(m);
      rec(spec_.gens[m.gen].parity ? i + 1 : i, left + m.n);
      cur.pop_back();
    }
  };
  if (level >= Exponent(0)) rec(0, level);
  std::sort(found.begin(), found.end(), [](const FockState& x, const FockState& y) {
    return std::lexicographical_compare(x.modes.begin(), x.modes.end(), y.modes.begin(), y.modes.end(), mode_less);
  });
  std::vector<uint32_t> ids;
  for (auto& f : found)
    for (uint32_t j = 0; j < spec_.vac_names.size(); ++j) {
      f.vac = j;
      ids.push_back(intern(f));
    }
  return ids;
}

std::vector<Exponent> FockSpace::levels_upto(Exponent max_level) const {
  // levels are sums of -n over creation modes; collect reachable ones
  std::set<int64_t> raw{0};
  std::vector<Exponent> steps;
  for (size_t a = 0; a < spec_.gens.size(); ++a) {
    Exponent r = spec_.coset[a];
    Exponent first = r == Exponent(0) ? Exponent(1) : Exponent(1) - r;
    steps.push_back(first);
  }
  bool grew = true;
  while (grew) {
    grew = false;
    std::set<int64_t> next = raw;
    for (auto x : raw)
      for (auto s : steps)
        for (Exponent y = Exponent::from_raw(x) + s; y <= max_level; y += Exponent(1))
          if (next.insert(y.raw()).second) grew = true;
    raw = std::move(next);
  }
  std::vector<Exponent> out;
  for (auto x : raw) out.push_back(Exponent::from_raw(x));
  return out;
}

std::vector<uint32_t> FockSpace::basis_upto(Exponent max_level) const {
  std::vector<uint32_t> out;
  for (Exponent l : levels_upto(max_level)) {
    auto b = basis_at(l);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

int FockSpace::parity_of(const Vec& v) const {
  int p = -1;
  for (auto& [i, c] : v.entries()) {
    int q = parity(i);
    if (p == -1)
      p = q;
    else if (p != q)
      return -1;
  }
  return p;
}

}  // namespace twistvo
