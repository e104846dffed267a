#include "twistvo/vertex.hpp"

#include <mutex>

namespace twistvo {

VertexEngine::VertexEngine(std::shared_ptr<const FockSpace> V, std::shared_ptr<const FockSpace> W, std::vector<Exponent> alpha,
                           bool flip_iterate_sign)
    : V_(std::move(V)), W_(std::move(W)), alpha_(std::move(alpha)), flip_(flip_iterate_sign) {
  if (alpha_.size() != V_->num_generators() || W_->num_generators() != V_->num_generators())
    throw EngineError("module and algebra generators differ");
  for (auto& a : alpha_) a = a.residue();
}

Exponent VertexEngine::alpha_of(uint32_t u) const {
  Exponent s;
  for (auto& m : V_->state(u).modes) s += alpha_[m.gen];
  return s.residue();
}

Vec VertexEngine::gen_mode(int a, Exponent p, const Vec& w) const {
  return W_->apply(a, p + Exponent(1) - V_->generator(a).weight, w);
}

Vec VertexEngine::coeff(uint32_t u, Exponent e, uint32_t w) const {
  if (W_->level(w) + V_->level(u) + e < Exponent(0)) return {};
  Key k{u, w, e.raw()};
  {
    std::shared_lock lk(mu_);
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
  }
  Vec r = compute(u, e, w);
  std::unique_lock lk(mu_);
  memo_.emplace(k, r);
  return r;
}

Vec VertexEngine::coeff(const Vec& u, Exponent e, const Vec& w) const {
  Vec out;
  for (auto& [i, ci] : u.entries())
    for (auto& [j, cj] : w.entries()) {
      Vec t = coeff(i, e, j);
      if (t.is_zero()) continue;
      t *= ci * cj;
      out += t;
    }
  return out;
}

Vec VertexEngine::compute(uint32_t u, Exponent e, uint32_t w) const {
  FockState s = V_->state(u);
  if (s.modes.empty()) return e == Exponent(0) ? Vec::basis(w) : Vec{};
  const Mode first = s.modes.front();
  const int a = first.gen;
  const Exponent d = V_->generator(a).weight;
  if (s.modes.size() == 1 && first.n == -d) return gen_mode(a, -e - Exponent(1), Vec::basis(w));

  // u = a_(k) v with v the remaining PBW monomial
  FockState rest = s;
  rest.modes.erase(rest.modes.begin());
  const uint32_t v = V_->intern(rest);
  const long k = (first.n + d - Exponent(1)).to_long();
  const Exponent alpha = alpha_[a];
  int eps = (V_->generator(a).parity && V_->parity(v)) ? -1 : 1;
  if (flip_) eps = -eps;

  // Y(Y(a,x0)v,x2) = (x2+x0)^{-alpha} G(x0,x2); G's x0-powers are bounded
  // above by wt a + wt v, which truncates the binomial sum.
  const long I = (d + V_->level(v) - Exponent(1)).floor() - k;
  Vec out;
  const Q ma = (-alpha).to_q();
  for (long i = 0; i <= I; ++i) {
    Q c = binom(ma, i);
    if (c == 0) continue;
    Vec t = residue_term(a, alpha, k + i, e + alpha + Exponent(i), v, w, eps);
    if (t.is_zero()) continue;
    t *= Scalar(c);
    out += t;
  }
  return out;
}

// Coefficient of x0^{-K-1} x2^e in G = Res_{x1} x1^alpha (Jacobi left side):
//   sum_j C(K,j)(-1)^j a_(alpha+K-j) Y(v,x2)w
//   - eps sum_j C(K,j)(-1)^{K-j} Y(v,x2) a_(alpha+j) w
Vec VertexEngine::residue_term(int a, Exponent alpha, long K, Exponent e, uint32_t v, uint32_t w, int eps) const {
  const Exponent lw = W_->level(w), wv = V_->level(v), d = V_->generator(a).weight;
  const Q Kq(K);
  Vec out;

  long jmax1 = (lw + wv + e).floor();
  if (K >= 0) jmax1 = std::min(jmax1, K);
  for (long j = 0; j <= jmax1; ++j) {
    Q c = binom(Kq, j);
    if (c == 0) continue;
    if (j % 2) c = -c;
    Vec y = coeff(v, e - Exponent(j), w);
    if (y.is_zero()) continue;
    Vec t = gen_mode(a, alpha + Exponent(K - j), y);
    if (t.is_zero()) continue;
    t *= Scalar(c);
    out += t;
  }

  long jmax2 = (lw + d - alpha - Exponent(1)).floor();
  if (K >= 0) jmax2 = std::min(jmax2, K);
  const Vec wv1 = Vec::basis(w);
  for (long j = 0; j <= jmax2; ++j) {
    Q c = binom(Kq, j);
    if (c == 0) continue;
    if ((K - j) % 2) c = -c;
    if (eps < 0) c = -c;
    Vec z = gen_mode(a, alpha + Exponent(j), wv1);
    if (z.is_zero()) continue;
    Vec t = coeff(Vec::basis(v), e - Exponent(K - j), z);
    if (t.is_zero()) continue;
    t *= Scalar(Q(-c));
    out += t;
  }
  return out;
}

}  // namespace twistvo
