#pragma once

#include <array>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "twistvo/exponent.hpp"
#include "twistvo/scalar.hpp"
#include "twistvo/vec.hpp"

namespace twistvo {

constexpr int kMaxVars = 8;

// Formal variables. The id order is the declared order used for printing.
enum Var : int { X = 0, X0 = 1, X1 = 2, X2 = 3, X3 = 4, X4 = 5, YV = 6, TV = 7 };

const char* var_name(int v);
int var_from_name(const std::string& s);  // -1 if unknown
constexpr uint32_t bit(int v) { return 1u << v; }

struct Monomial {
  std::array<Exponent, kMaxVars> e{};
  std::array<uint8_t, kMaxVars> k{};

  friend bool operator==(const Monomial&, const Monomial&) = default;
  Exponent total_degree() const {
    Exponent d;
    for (auto x : e) d += x;
    return d;
  }
  std::string str(uint32_t mask) const;
};

struct MonomialHash {
  size_t operator()(const Monomial& m) const noexcept {
    size_t h = 1469598103934665603ull;
    for (int i = 0; i < kMaxVars; ++i) {
      h = (h ^ size_t(m.e[i].raw())) * 1099511628211ull;
      h = (h ^ size_t(m.k[i])) * 1099511628211ull;
    }
    return h;
  }
};

// What is known about the exponents of one variable, used both to answer
// zero cheaply and to certify that convolutions are finite sums.
struct VarSupport {
  std::optional<Exponent> lo, hi;
  std::vector<Exponent> cosets;  // residues mod 1; empty means unknown
  int log_bound = 0;

  static VarSupport integral() { return VarSupport{std::nullopt, std::nullopt, {Exponent(0)}, 0}; }
  static VarSupport coset(Exponent r) { return VarSupport{std::nullopt, std::nullopt, {r.residue()}, 0}; }
  bool bounded() const { return lo && hi; }
};

struct Support {
  uint32_t mask = 0;
  std::array<VarSupport, kMaxVars> v;
  std::optional<Exponent> degree;  // set when the series is homogeneous

  Support& with(int var, VarSupport s) {
    mask |= bit(var);
    v[var] = std::move(s);
    return *this;
  }
  bool admits(const Monomial& m) const;
};

// -------------------------------------------------------------- nodes

template <class T>
class Node {
 public:
  explicit Node(Support s) : sup_(std::move(s)) {}
  virtual ~Node() = default;
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  const Support& support() const { return sup_; }

  // Exact coefficient; memoized. Concurrent callers may both compute a missing
  // entry, the values agree so the second insert is a no-op.
  T coeff(const Monomial& m) const {
    if (!sup_.admits(m)) return T{};
    {
      std::shared_lock lk(mu_);
      auto it = cache_.find(m);
      if (it != cache_.end()) return it->second;
    }
    T val = compute(m);
    std::unique_lock lk(mu_);
    cache_.emplace(m, val);
    return val;
  }

 protected:
  virtual T compute(const Monomial& m) const = 0;

 private:
  Support sup_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<Monomial, T, MonomialHash> cache_;
};

template <class T>
using Series = std::shared_ptr<const Node<T>>;
using SSeries = Series<Scalar>;
using VSeries = Series<Vec>;

template <class T>
class FnNode final : public Node<T> {
 public:
  FnNode(Support s, std::function<T(const Monomial&)> f) : Node<T>(std::move(s)), f_(std::move(f)) {}

 protected:
  T compute(const Monomial& m) const override { return f_(m); }

 private:
  std::function<T(const Monomial&)> f_;
};

template <class T>
Series<T> make_series(Support s, std::function<T(const Monomial&)> f) {
  return std::make_shared<FnNode<T>>(std::move(s), std::move(f));
}

namespace detail {

Support sum_support(const std::vector<const Support*>& parts);
Support product_support(const Support& a, const Support& b);
// Validates that a*b has finite convolution sums; returns the variable (or -1)
// that must be solved from a homogeneity constraint.
int product_plan(const Support& a, const Support& b);

// Enumerates the admissible splits m = ma + mb for a product.
void for_each_split(const Support& a, const Support& b, int solve_var, const Monomial& m,
                    const std::function<void(const Monomial&, const Monomial&)>& f);

}  // namespace detail

template <class T>
class LinCombNode final : public Node<T> {
 public:
  using Terms = std::vector<std::pair<Scalar, Series<T>>>;
  explicit LinCombNode(Terms t) : Node<T>(make_sup(t)), t_(std::move(t)) {}

 protected:
  T compute(const Monomial& m) const override {
    T acc{};
    for (auto& [c, s] : t_) {
      T x = s->coeff(m);
      if (x.is_zero()) continue;
      x *= c;
      acc += x;
    }
    return acc;
  }

 private:
  static Support make_sup(const Terms& t) {
    std::vector<const Support*> p;
    for (auto& [c, s] : t) p.push_back(&s->support());
    return detail::sum_support(p);
  }
  Terms t_;
};

template <class T>
class MulNode final : public Node<T> {
 public:
  MulNode(SSeries a, Series<T> b)
      : Node<T>(detail::product_support(a->support(), b->support())),
        a_(std::move(a)),
        b_(std::move(b)),
        solve_(detail::product_plan(a_->support(), b_->support())) {}

 protected:
  T compute(const Monomial& m) const override {
    T acc{};
    detail::for_each_split(a_->support(), b_->support(), solve_, m, [&](const Monomial& ma, const Monomial& mb) {
      Scalar ca = a_->coeff(ma);
      if (ca.is_zero()) return;
      T cb = b_->coeff(mb);
      if (cb.is_zero()) return;
      cb *= ca;
      acc += cb;
    });
    return acc;
  }

 private:
  SSeries a_;
  Series<T> b_;
  int solve_;
};

// x^n -> e^{pi i phi n} x'^n, log x -> log x' + phi Pi, optionally renaming x to x'.
template <class T>
class PhaseShiftNode final : public Node<T> {
 public:
  PhaseShiftNode(Series<T> s, int from, int to, int phi) : Node<T>(make_sup(s->support(), from, to)), s_(std::move(s)), from_(from), to_(to), phi_(phi) {}

 protected:
  T compute(const Monomial& m) const override {
    Monomial src = m;
    Exponent e = m.e[to_];
    int k = m.k[to_];
    if (from_ != to_) {
      src.e[to_] = Exponent(0);
      src.k[to_] = 0;
    }
    src.e[from_] = e;
    T acc{};
    Scalar ph = Scalar::expi(Q(phi_) * e.to_q());
    Scalar shift = Scalar(Q(phi_)) * Scalar::pi_pow(1);
    int jb = s_->support().v[from_].log_bound;
    for (int j = k; j <= jb; ++j) {
      src.k[from_] = uint8_t(j);
      T c = s_->coeff(src);
      if (c.is_zero()) continue;
      Scalar f = ph;
      if (j > k) {
        Scalar p = Scalar::one();
        for (int i = 0; i < j - k; ++i) p *= shift;
        f *= p * Scalar(binom(Q(j), k));
      }
      c *= f;
      acc += c;
    }
    return acc;
  }

 private:
  static Support make_sup(const Support& s, int from, int to) {
    Support r = s;
    if (from != to) {
      if (s.mask & bit(to)) throw EngineError("substitution target already present");
      r.mask &= ~bit(from);
      r.mask |= bit(to);
      r.v[to] = s.v[from];
      r.v[from] = VarSupport{};
    }
    return r;
  }
  Series<T> s_;
  int from_, to_, phi_;
};

template <class T>
class ResidueNode final : public Node<T> {
 public:
  ResidueNode(Series<T> s, int var) : Node<T>(make_sup(s->support(), var)), s_(std::move(s)), var_(var) {}

 protected:
  T compute(const Monomial& m) const override {
    Monomial src = m;
    src.e[var_] = Exponent(-1);
    src.k[var_] = 0;
    return s_->coeff(src);
  }

 private:
  static Support make_sup(const Support& s, int var) {
    const VarSupport& vs = s.v[var];
    if (!(s.mask & bit(var))) {
      Support r = s;
      return r;
    }
    if (vs.log_bound > 0) throw NonMeromorphicVariable(std::string("residue in ") + var_name(var) + " with log terms");
    if (vs.cosets.empty()) throw NonMeromorphicVariable(std::string("residue in ") + var_name(var) + " with unknown exponent coset");
    for (auto c : vs.cosets)
      if (c != Exponent(0)) throw NonMeromorphicVariable(std::string("residue in ") + var_name(var) + " with fractional exponents");
    Support r = s;
    r.mask &= ~bit(var);
    r.v[var] = VarSupport{};
    if (r.degree) r.degree = *r.degree + Exponent(1);
    return r;
  }
  Series<T> s_;
  int var_;
};

template <class T>
class DerivNode final : public Node<T> {
 public:
  DerivNode(Series<T> s, int var) : Node<T>(make_sup(s->support(), var)), s_(std::move(s)), var_(var) {}

 protected:
  T compute(const Monomial& m) const override {
    Monomial src = m;
    src.e[var_] = m.e[var_] + Exponent(1);
    T a = s_->coeff(src);
    if (!a.is_zero()) a *= Scalar(src.e[var_].to_q());
    src.k[var_] = uint8_t(m.k[var_] + 1);
    if (src.k[var_] <= s_->support().v[var_].log_bound) {
      T b = s_->coeff(src);
      if (!b.is_zero()) {
        b *= Scalar(long(src.k[var_]));
        a += b;
      }
    }
    return a;
  }

 private:
  static Support make_sup(const Support& s, int var) {
    Support r = s;
    if (!(s.mask & bit(var))) return r;
    auto& vs = r.v[var];
    if (vs.lo) vs.lo = *vs.lo - Exponent(1);
    if (vs.hi) vs.hi = *vs.hi - Exponent(1);
    if (r.degree) r.degree = *r.degree - Exponent(1);
    return r;
  }
  Series<T> s_;
  int var_;
};

template <class S, class T>
class MapNode final : public Node<T> {
 public:
  MapNode(Series<S> s, Support sup, std::function<T(const S&)> f) : Node<T>(std::move(sup)), s_(std::move(s)), f_(std::move(f)) {}

 protected:
  T compute(const Monomial& m) const override {
    S c = s_->coeff(m);
    if (c.is_zero()) return T{};
    return f_(c);
  }

 private:
  Series<S> s_;
  std::function<T(const S&)> f_;
};

// -------------------------------------------------------------- helpers

template <class T>
Series<T> lincomb(typename LinCombNode<T>::Terms t) {
  return std::make_shared<LinCombNode<T>>(std::move(t));
}
template <class T>
Series<T> add(Series<T> a, Series<T> b) {
  return lincomb<T>({{Scalar::one(), std::move(a)}, {Scalar::one(), std::move(b)}});
}
template <class T>
Series<T> sub(Series<T> a, Series<T> b) {
  return lincomb<T>({{Scalar::one(), std::move(a)}, {Scalar(-1L), std::move(b)}});
}
template <class T>
Series<T> scale(Scalar c, Series<T> a) {
  return lincomb<T>({{std::move(c), std::move(a)}});
}
template <class T>
Series<T> mul(SSeries a, Series<T> b) {
  return std::make_shared<MulNode<T>>(std::move(a), std::move(b));
}
template <class T>
Series<T> residue(Series<T> s, int var) {
  return std::make_shared<ResidueNode<T>>(std::move(s), var);
}
template <class T>
Series<T> derivative(Series<T> s, int var) {
  return std::make_shared<DerivNode<T>>(std::move(s), var);
}
template <class T>
Series<T> phase_shift(Series<T> s, int from, int to, int phi) {
  return std::make_shared<PhaseShiftNode<T>>(std::move(s), from, to, phi);
}
template <class T>
Series<T> zero_series() {
  return make_series<T>(Support{}, [](const Monomial&) { return T{}; });
}

// scalar series times a fixed vector
VSeries tensor(SSeries s, Vec v);
// sum_i s_i (x) v_i
VSeries tensor_sum(const std::vector<std::pair<SSeries, Vec>>& parts);
// pairing against a linear functional given on basis indices
SSeries pair_with(VSeries s, std::function<Scalar(const Vec&)> functional, std::optional<Exponent> degree = std::nullopt);
VSeries apply_map(VSeries s, LinearMap f);

// -------------------------------------------------------------- windows

struct Window {
  uint32_t mask = 0;
  std::array<Exponent, kMaxVars> lo{}, hi{};
  std::array<int, kMaxVars> log_bound{};

  static Window box(std::initializer_list<int> vars, Exponent lo, Exponent hi, int log_bound = 0);
  std::string str() const;
};

// Monomials of the window whose exponents lie in the union of the cosets that
// the given supports declare for each variable.
std::vector<Monomial> window_monomials(const Window& w, const std::vector<const Support*>& sups);

template <class T>
struct Mismatch {
  Monomial m;
  T lhs, rhs;
};

template <class T>
std::optional<Mismatch<T>> compare_on_window(const Series<T>& a, const Series<T>& b, const Window& w) {
  for (const Monomial& m : window_monomials(w, {&a->support(), &b->support()})) {
    T x = a->coeff(m);
    T y = b->coeff(m);
    if (!(x == y)) return Mismatch<T>{m, std::move(x), std::move(y)};
  }
  return std::nullopt;
}

// c times the monomial, e.g. "-1/2·x^{-1/2}"
std::string term_str(const Scalar& c, const Monomial& m, uint32_t mask);

// Deterministic rendering of the nonzero terms on a window.
std::string format_series(const SSeries& s, const Window& w);

}  // namespace twistvo
