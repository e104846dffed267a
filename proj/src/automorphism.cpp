#include "twistvo/automorphism.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace twistvo {

Automorphism::Automorphism(std::shared_ptr<const FockSpace> space, Matrix on_generators, std::optional<Matrix> on_vacuum)
    : F_(std::move(space)), g_(std::move(on_generators)) {
  size_t n = F_->num_generators();
  if (g_.rows() != n || g_.cols() != n) throw EngineError("automorphism matrix has the wrong shape");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (g_(i, j).is_zero()) continue;
      const auto &a = F_->generator(int(i)), &b = F_->generator(int(j));
      if (a.parity != b.parity || a.weight != b.weight) throw EngineError("automorphism mixes generators of different parity or weight");
    }
  inverse(g_);  // throws when singular
  size_t dv = F_->spec().vac_names.size();
  vac_ = on_vacuum ? *on_vacuum : Matrix::identity(dv);
}

Vec Automorphism::apply(const Vec& v) const {
  Vec out;
  for (auto& [id, c] : v.entries()) {
    FockState s = F_->state(id);
    Vec r;
    for (size_t k = 0; k < vac_.rows(); ++k)
      if (!vac_(k, s.vac).is_zero()) r.add(F_->intern(FockState{{}, uint32_t(k)}), vac_(k, s.vac));
    for (auto it = s.modes.rbegin(); it != s.modes.rend(); ++it) {
      Vec next;
      for (size_t b = 0; b < g_.rows(); ++b) {
        const Scalar& gb = g_(b, it->gen);
        if (gb.is_zero()) continue;
        Vec t = F_->apply(int(b), it->n, r);
        t *= gb;
        next += t;
      }
      r = std::move(next);
    }
    r *= c;
    out += r;
  }
  return out;
}

Matrix Automorphism::block(Exponent level) const {
  auto basis = F_->basis_at(level);
  std::map<uint32_t, size_t> pos;
  for (size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = i;
  Matrix m(basis.size(), basis.size());
  for (size_t j = 0; j < basis.size(); ++j) {
    Vec img = apply(basis[j]);
    for (auto& [id, c] : img.entries()) {
      auto it = pos.find(id);
      if (it == pos.end()) throw EngineError("automorphism does not preserve the grading");
      m(it->second, j) = c;
    }
  }
  return m;
}

void Automorphism::require_isometry() const {
  const Matrix& G = F_->spec().gram;
  size_t n = g_.rows();
  Matrix gt(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) gt(i, j) = g_(j, i);
  if (!(gt * G * g_ == G)) throw NotIsometry("automorphism does not preserve the bracket form");
}

Scalar root_of_unity(Exponent alpha) { return Scalar::expi(Q(2) * alpha.to_q()); }

Exponent alpha_of_root(const Scalar& z) {
  for (int64_t k = 0; k < Exponent::kDen; ++k) {
    Exponent a = Exponent::from_raw(k);
    Q twice = Q(2) * a.to_q() * Scalar::kPhaseDen;
    if (!is_integer(twice)) continue;
    if (root_of_unity(a) == z) return a;
  }
  throw NonCyclotomicSpectrum("eigenvalue " + z.str() + " is not a supported root of unity");
}

namespace {

// Leibniz determinant; only used on the small generator space.
Scalar det(const Matrix& m) {
  size_t n = m.rows();
  std::vector<size_t> p(n);
  for (size_t i = 0; i < n; ++i) p[i] = i;
  Scalar d;
  do {
    int inv = 0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        if (p[i] > p[j]) inv ^= 1;
    Scalar t = Scalar::one();
    for (size_t i = 0; i < n && !t.is_zero(); ++i) t *= m(i, p[i]);
    d += inv ? -t : t;
  } while (std::next_permutation(p.begin(), p.end()));
  return d;
}

Matrix shifted(const Matrix& g, const Scalar& z) {
  Matrix m = g;
  for (size_t i = 0; i < m.rows(); ++i) m(i, i) -= z;
  return m;
}

}  // namespace

std::vector<Exponent> spectrum_candidates(const Matrix& g_gen) {
  std::set<int64_t> eig;
  for (int64_t k = 0; k < Exponent::kDen; ++k) {
    Exponent a = Exponent::from_raw(k);
    if (!is_integer(Q(2) * a.to_q() * Scalar::kPhaseDen)) continue;
    if (det(shifted(g_gen, root_of_unity(a))).is_zero()) eig.insert(k);
  }
  if (g_gen.rows() > 0 && eig.empty()) throw NonCyclotomicSpectrum("generator matrix has no root-of-unity eigenvalue");
  // products of eigenvalues: the subgroup of R/Z they generate
  std::set<int64_t> group{0};
  bool grew = true;
  while (grew) {
    grew = false;
    for (auto x : std::vector<int64_t>(group.begin(), group.end()))
      for (auto y : eig)
        if (group.insert((x + y) % Exponent::kDen).second) grew = true;
  }
  std::vector<Exponent> out;
  for (auto x : group) out.push_back(Exponent::from_raw(x));
  return out;
}

JordanBlock decompose_block(const Matrix& g, const std::vector<Exponent>& candidates) {
  JordanBlock b;
  b.g = g;
  size_t n = g.rows();
  b.semisimple = Matrix(n, n);
  b.two_pi_i_N = Matrix(n, n);
  if (n == 0) return b;
  std::vector<std::pair<Exponent, Matrix>> spaces;
  size_t total = 0;
  for (Exponent a : candidates) {
    Matrix m = shifted(g, root_of_unity(a));
    for (size_t p = 1; p < n; p *= 2) m = m * m;
    Matrix k = kernel(m);
    if (k.cols() == 0) continue;
    total += k.cols();
    spaces.push_back({a, std::move(k)});
  }
  if (total != n) throw NonCyclotomicSpectrum("block spectrum is not made of the candidate roots of unity");
  Matrix B(n, n);
  size_t col = 0;
  std::vector<std::pair<size_t, size_t>> ranges;
  for (auto& [a, k] : spaces) {
    ranges.push_back({col, col + k.cols()});
    for (size_t j = 0; j < k.cols(); ++j, ++col)
      for (size_t i = 0; i < n; ++i) B(i, col) = k(i, j);
  }
  Matrix Binv = inverse(B);
  Matrix U(n, n);
  for (size_t s = 0; s < spaces.size(); ++s) {
    Matrix E(n, n);
    for (size_t j = ranges[s].first; j < ranges[s].second; ++j) E(j, j) = Scalar::one();
    Matrix P = B * E * Binv;
    Exponent a = spaces[s].first;
    b.projector[a] = P;
    b.semisimple = b.semisimple + P * root_of_unity(a);
    U = U + P * g * root_of_unity(-a);
  }
  b.two_pi_i_N = log_unipotent(U - Matrix::identity(n));
  b.nilpotency_index = nilpotency_index(b.two_pi_i_N);
  return b;
}

const JordanBlock* JordanDecomposition::block_of(uint32_t id) const {
  auto it = index.find(id);
  return it == index.end() ? nullptr : &blocks[it->second.first];
}

namespace {
Vec apply_blockwise(const JordanDecomposition& J, const Vec& v, const std::function<const Matrix&(const JordanBlock&)>& pick) {
  Vec out;
  for (auto& [id, c] : v.entries()) {
    auto it = J.index.find(id);
    if (it == J.index.end()) throw EngineError("vector outside the decomposed weight range");
    const JordanBlock& b = J.blocks[it->second.first];
    const Matrix& m = pick(b);
    size_t j = it->second.second;
    for (size_t i = 0; i < b.basis.size(); ++i)
      if (!m(i, j).is_zero()) out.add(b.basis[i], m(i, j) * c);
  }
  return out;
}
}  // namespace

Vec JordanDecomposition::apply_semisimple(const Vec& v) const {
  return apply_blockwise(*this, v, [](const JordanBlock& b) -> const Matrix& { return b.semisimple; });
}

Vec JordanDecomposition::apply_two_pi_i_N(const Vec& v) const {
  return apply_blockwise(*this, v, [](const JordanBlock& b) -> const Matrix& { return b.two_pi_i_N; });
}

Vec JordanDecomposition::apply_N(const Vec& v) const {
  Vec r = apply_two_pi_i_N(v);
  r *= Scalar(make_q(1, 2)) * Scalar::pi_pow(-1);
  return r;
}

std::map<Exponent, Vec> JordanDecomposition::alpha_decompose(const Vec& v) const {
  std::map<Exponent, Vec> out;
  for (auto& [id, c] : v.entries()) {
    auto it = index.find(id);
    if (it == index.end()) throw EngineError("vector outside the decomposed weight range");
    const JordanBlock& b = blocks[it->second.first];
    size_t j = it->second.second;
    for (auto& [a, P] : b.projector) {
      Vec part;
      for (size_t i = 0; i < b.basis.size(); ++i)
        if (!P(i, j).is_zero()) part.add(b.basis[i], P(i, j) * c);
      if (!part.is_zero()) out[a] += part;
    }
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

bool JordanDecomposition::nilpotent_part_is_zero() const {
  for (auto& b : blocks)
    if (!b.two_pi_i_N.is_zero()) return false;
  return true;
}

JordanDecomposition jordan_decompose(const Automorphism& g, Exponent weight_cutoff) {
  JordanDecomposition J;
  auto cands = spectrum_candidates(g.on_generators());
  std::set<Exponent> spec;
  for (Exponent l : g.space().levels_upto(weight_cutoff)) {
    JordanBlock b = decompose_block(g.block(l), cands);
    b.level = l;
    b.basis = g.space().basis_at(l);
    for (auto& [a, P] : b.projector) spec.insert(a);
    for (size_t i = 0; i < b.basis.size(); ++i) J.index[b.basis[i]] = {J.blocks.size(), i};
    J.blocks.push_back(std::move(b));
  }
  J.spectrum.assign(spec.begin(), spec.end());
  return J;
}

bool semisimple_nilpotent_commute(const JordanDecomposition& J) {
  for (auto& b : J.blocks)
    if (!(b.semisimple * b.two_pi_i_N == b.two_pi_i_N * b.semisimple)) return false;
  return true;
}

// ------------------------------------------------------------------ checks

namespace {

std::vector<Exponent> exponents_for(const VertexEngine& V, uint32_t u, uint32_t w, long half_width) {
  // e = level(out) - level(w) - wt u, with level(out) in the module's level cosets
  std::set<Exponent> res;
  for (Exponent l : V.module().levels_upto(Exponent(2))) res.insert(l.residue());
  std::vector<Exponent> out;
  Exponent shift = V.module().level(w) + V.algebra().level(u);
  for (Exponent r : res) {
    Exponent base = r - shift;
    for (Exponent e = base + Exponent((Exponent(-half_width) - base).ceil()); e <= Exponent(half_width); e += Exponent(1)) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string at(const VertexEngine& V, uint32_t u, uint32_t w, Exponent e) {
  return "u=" + V.algebra().name(u) + " v=" + V.module().name(w) + " at x^" + e.str();
}

}  // namespace

CheckResult check_derivation(const VertexEngine& V, const JordanDecomposition& J, Exponent weight_cutoff, long half_width) {
  auto basis = V.algebra().basis_upto(weight_cutoff);
  for (uint32_t u : basis) {
    Vec Nu = J.apply_two_pi_i_N(Vec::basis(u));
    for (uint32_t w : basis) {
      Vec Nw = J.apply_two_pi_i_N(Vec::basis(w));
      for (Exponent e : exponents_for(V, u, w, half_width)) {
        Vec y = V.coeff(u, e, w);
        if (V.algebra().level(u) + V.algebra().level(w) + e > weight_cutoff) continue;
        Vec lhs = J.apply_two_pi_i_N(y);
        lhs -= V.coeff(Vec::basis(u), e, Nw);
        Vec rhs = V.coeff(Nu, e, Vec::basis(w));
        if (!(lhs == rhs)) return CheckFailure{"derivation", at(V, u, w, e)};
      }
    }
  }
  return std::nullopt;
}

CheckResult check_conjugation(const VertexEngine& V, const JordanDecomposition& J, Exponent weight_cutoff, long half_width) {
  auto basis = V.algebra().basis_upto(weight_cutoff);
  auto orbit = [&](uint32_t x) {
    std::vector<Vec> o{Vec::basis(x)};
    while (true) {
      Vec n = J.apply_N(o.back());
      if (n.is_zero()) break;
      n *= Scalar(make_q(1, long(o.size())));  // keeps N^k x / k!
      o.push_back(n);
    }
    return o;
  };
  for (uint32_t u : basis) {
    auto ou = orbit(u);
    for (uint32_t w : basis) {
      auto ow = orbit(w);
      for (Exponent e : exponents_for(V, u, w, half_width)) {
        if (V.algebra().level(u) + V.algebra().level(w) + e > weight_cutoff) continue;
        Vec y = V.coeff(u, e, w);
        // coefficient of (log x0)^k on each side
        std::vector<Vec> lhs{y};
        while (true) {
          Vec n = J.apply_N(lhs.back());
          if (n.is_zero()) break;
          n *= Scalar(make_q(1, long(lhs.size())));
          lhs.push_back(n);
        }
        size_t kmax = std::max(lhs.size(), ou.size() + ow.size());
        for (size_t k = 0; k < kmax; ++k) {
          Vec rhs;
          for (size_t i = 0; i <= k && i < ou.size(); ++i)
            if (k - i < ow.size()) rhs += V.coeff(ou[i], e, ow[k - i]);
          Vec l = k < lhs.size() ? lhs[k] : Vec{};
          if (!(l == rhs)) return CheckFailure{"conjugation", at(V, u, w, e) + " log(x0)^" + std::to_string(k)};
        }
      }
    }
  }
  return std::nullopt;
}

CheckResult check_homomorphism(const VertexEngine& V, const LinearMap& g, Exponent weight_cutoff, long half_width) {
  auto basis = V.algebra().basis_upto(weight_cutoff);
  for (uint32_t u : basis) {
    Vec gu = g(Vec::basis(u));
    for (uint32_t w : basis) {
      Vec gw = g(Vec::basis(w));
      for (Exponent e : exponents_for(V, u, w, half_width)) {
        if (V.algebra().level(u) + V.algebra().level(w) + e > weight_cutoff) continue;
        Vec lhs = g(V.coeff(u, e, w));
        Vec rhs = V.coeff(gu, e, gw);
        if (!(lhs == rhs)) return CheckFailure{"homomorphism", at(V, u, w, e)};
      }
    }
  }
  return std::nullopt;
}

}  // namespace twistvo
