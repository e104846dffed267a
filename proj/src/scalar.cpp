#include "twistvo/scalar.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace twistvo {

Q parse_q(const std::string& s) {
  std::string t;
  for (char ch : s)
    if (ch != ' ') t += ch;
  if (t.empty()) throw EngineError("empty rational");
  if (t[0] == '+') t = t.substr(1);
  Q q;
  if (q.set_str(t, 10) != 0) throw EngineError("bad rational '" + s + "'");
  if (q.get_den() == 0) throw EngineError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string q_str(const Q& q) { return q.get_str(); }

bool is_integer(const Q& q) { return q.get_den() == 1; }

long q_to_long(const Q& q) {
  if (!is_integer(q) || !q.get_num().fits_slong_p()) throw EngineError("not a machine integer: " + q_str(q));
  return q.get_num().get_si();
}

Q factorial(long n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Q(f);
}

Q binom(const Q& a, long n) {
  if (n < 0) return Q(0);
  if (is_integer(a) && a.get_num().fits_slong_p()) {
    long m = a.get_num().get_si();
    if (m >= 0 && n > m) return Q(0);
    mpz_class r;
    if (m >= 0) {
      mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(n));
      return Q(r);
    }
    // C(-k, n) = (-1)^n C(k+n-1, n)
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(-m + n - 1), static_cast<unsigned long>(n));
    return (n % 2) ? Q(-r) : Q(r);
  }
  Q r = 1;
  for (long i = 0; i < n; ++i) {
    r *= (a - i);
    r /= (i + 1);
  }
  return r;
}

// ---------------------------------------------------------------- Exponent

Exponent::Exponent(const Q& q) {
  Q s = q * kDen;
  if (!twistvo::is_integer(s)) throw EngineError("exponent " + q_str(q) + " not representable");
  n_ = q_to_long(s);
}

Exponent Exponent::frac(long num, long den) { return Exponent(make_q(num, den)); }

Q Exponent::to_q() const { return make_q(n_, kDen); }

std::string Exponent::str() const { return q_str(to_q()); }

long Exponent::to_long() const {
  if (!is_integer()) throw EngineError("exponent " + str() + " is not integral");
  return n_ / kDen;
}

long Exponent::floor() const {
  int64_t q = n_ / kDen;
  if (n_ % kDen != 0 && n_ < 0) --q;
  return q;
}

long Exponent::ceil() const {
  int64_t q = n_ / kDen;
  if (n_ % kDen != 0 && n_ > 0) ++q;
  return q;
}

Exponent Exponent::residue() const {
  int64_t r = n_ % kDen;
  if (r < 0) r += kDen;
  return from_raw(r);
}

// ---------------------------------------------------------------- Scalar

Scalar::Scalar(long v) {
  if (v != 0) terms_.push_back({0, 0, Q(v)});
}

Scalar::Scalar(const Q& q) {
  if (q != 0) terms_.push_back({0, 0, q});
}

namespace {

int phase_of(const Q& q) {
  Q s = q * Scalar::kPhaseDen;
  if (!is_integer(s)) throw NonCyclotomicSpectrum("phase " + q_str(q) + " outside supported cyclotomic level");
  long k = q_to_long(s) % (2 * Scalar::kPhaseDen);
  if (k < 0) k += 2 * Scalar::kPhaseDen;
  return int(k);
}

}  // namespace

Scalar Scalar::expi(const Q& q) {
  int k = phase_of(q);
  Scalar s;
  if (k >= kPhaseDen)
    s.terms_.push_back({0, k - kPhaseDen, Q(-1)});
  else
    s.terms_.push_back({0, k, Q(1)});
  return s;
}

Scalar Scalar::expi(Exponent q) { return expi(q.to_q()); }

Scalar Scalar::pi_pow(int p) {
  Scalar s;
  s.terms_.push_back({p, 0, Q(1)});
  return s;
}

Scalar Scalar::sqrt2() {
  // zeta_8 + zeta_8^{-1}
  return expi(make_q(1, 4)) + expi(make_q(-1, 4));
}

Scalar Scalar::inv_sqrt2() { return sqrt2() * Q(make_q(1, 2)); }

bool Scalar::is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].pi == 0 && terms_[0].phase == 0); }

Q Scalar::rational() const {
  if (!is_rational()) throw EngineError("scalar " + str() + " is not rational");
  return terms_.empty() ? Q(0) : terms_[0].c;
}

int Scalar::max_pi() const {
  int m = 0;
  for (auto& t : terms_) m = std::max(m, t.pi);
  return m;
}

int Scalar::min_pi() const {
  int m = 0;
  for (auto& t : terms_) m = std::min(m, t.pi);
  return m;
}

void Scalar::add_term(int pi, int phase, const Q& c) {
  if (c == 0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), std::pair{pi, phase}, [](const Term& t, const std::pair<int, int>& k) {
    return std::pair{t.pi, t.phase} < k;
  });
  if (it != terms_.end() && it->pi == pi && it->phase == phase) {
    it->c += c;
    if (it->c == 0) terms_.erase(it);
  } else {
    terms_.insert(it, Term{pi, phase, c});
  }
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& t : r.terms_) t.c = -t.c;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) return *this = o;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && std::pair{terms_[i].pi, terms_[i].phase} < std::pair{o.terms_[j].pi, o.terms_[j].phase})) {
      out.push_back(std::move(terms_[i++]));
    } else if (i == terms_.size() || std::pair{o.terms_[j].pi, o.terms_[j].phase} < std::pair{terms_[i].pi, terms_[i].phase}) {
      out.push_back(o.terms_[j++]);
    } else {
      Q c = terms_[i].c + o.terms_[j].c;
      if (c != 0) out.push_back({terms_[i].pi, terms_[i].phase, c});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar r;
  if (a.terms_.empty() || b.terms_.empty()) return r;
  if (b.is_rational()) return Scalar(a) *= b.terms_[0].c;
  if (a.is_rational()) return Scalar(b) *= a.terms_[0].c;
  for (auto& x : a.terms_)
    for (auto& y : b.terms_) {
      int k = x.phase + y.phase;
      Q c = x.c * y.c;
      if (k >= Scalar::kPhaseDen) {
        k -= Scalar::kPhaseDen;
        c = -c;
      }
      r.add_term(x.pi + y.pi, k, c);
    }
  return r;
}

Scalar& Scalar::operator*=(const Scalar& o) { return *this = *this * o; }

Scalar& Scalar::operator*=(const Q& q) {
  if (q == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.c *= q;
  return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].pi != b.terms_[i].pi || a.terms_[i].phase != b.terms_[i].phase || a.terms_[i].c != b.terms_[i].c) return false;
  return true;
}

Scalar Scalar::conj() const {
  Scalar r;
  for (auto& t : terms_) {
    Q c = (t.pi % 2 != 0) ? Q(-t.c) : t.c;
    // conj(e^{pi i k/D}) = e^{-pi i k/D} = -e^{pi i (D-k)/D}
    if (t.phase == 0)
      r.add_term(t.pi, 0, c);
    else
      r.add_term(t.pi, kPhaseDen - t.phase, -c);
  }
  return r;
}

size_t Scalar::hash() const {
  size_t h = terms_.size();
  for (auto& t : terms_) {
    h = h * 1000003u ^ std::hash<int>()(t.pi * 131 + t.phase);
    h = h * 1000003u ^ std::hash<std::string>()(t.c.get_str());
  }
  return h;
}

namespace {

std::string phase_str(const Q& q) {
  // e^{pi i q} with q in (-1, 1]
  Q a = abs(q);
  std::string s = "e^{";
  if (q < 0) s += "-";
  if (a.get_num() != 1) s += a.get_num().get_str();
  s += "πi";
  if (a.get_den() != 1) s += "/" + a.get_den().get_str();
  return s + "}";
}

// Tries to write a Pi-free cyclotomic value as r * e^{pi i q} * 2^{s}.
bool factored(const Scalar& z, std::string& out) {
  if (z.is_rational()) {
    out = q_str(z.rational());
    return true;
  }
  struct Cand {
    Q r, q;
    int s;  // 0, -1, +1 for 2^{s/2}
  };
  std::vector<Cand> found;
  const int D = Scalar::kPhaseDen;
  for (int k = -D + 1; k <= D; ++k) {
    Q q = make_q(k, D);
    Scalar w = z * Scalar::expi(Q(-q));
    for (int s : {0, -1, 1}) {
      Scalar v = w;
      if (s == -1) v = v * Scalar::sqrt2();  // z e^{-i pi q} = r 2^{-1/2}  =>  r = v sqrt2
      if (s == 1) v = v * Scalar::inv_sqrt2();
      if (v.is_rational()) found.push_back({v.rational(), q, s});
    }
  }
  if (found.empty()) return false;
  auto rank = [](const Cand& c) {
    return std::tuple{c.q != 0, c.r < 0, abs(c.q), c.q > 0, c.s == 0 ? 0 : (c.s < 0 ? 1 : 2)};
  };
  auto best = *std::min_element(found.begin(), found.end(), [&](const Cand& a, const Cand& b) { return rank(a) < rank(b); });
  std::vector<std::string> parts;
  std::string sign;
  Q r = best.r;
  if (r < 0) {
    sign = "-";
    r = -r;
  }
  if (r != 1) parts.push_back(q_str(r));
  if (best.q != 0) parts.push_back(phase_str(best.q));
  if (best.s != 0) parts.push_back(best.s < 0 ? "2^{-1/2}" : "2^{1/2}");
  if (parts.empty()) parts.push_back("1");
  out = sign;
  for (size_t i = 0; i < parts.size(); ++i) out += (i ? "·" : "") + parts[i];
  return true;
}

}  // namespace

std::string Scalar::canonical_str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << q_str(t.c);
    if (t.phase) os << "·" << phase_str(make_q(t.phase, kPhaseDen));
    if (t.pi) os << "·Π^" << t.pi;
  }
  return os.str();
}

std::string Scalar::str() const {
  if (terms_.empty()) return "0";
  std::vector<std::string> groups;
  size_t i = 0;
  while (i < terms_.size()) {
    int p = terms_[i].pi;
    Scalar part;
    while (i < terms_.size() && terms_[i].pi == p) {
      part.terms_.push_back({0, terms_[i].phase, terms_[i].c});
      ++i;
    }
    std::string body;
    if (!factored(part, body)) body = "(" + part.canonical_str() + ")";
    if (p != 0) {
      std::string pp = (p == 1) ? "Π" : "Π^" + std::to_string(p);
      if (body == "1")
        body = pp;
      else if (body == "-1")
        body = "-" + pp;
      else
        body += "·" + pp;
    }
    groups.push_back(body);
  }
  std::string out;
  for (size_t g = 0; g < groups.size(); ++g) {
    if (g == 0)
      out = groups[g];
    else if (!groups[g].empty() && groups[g][0] == '-')
      out += " - " + groups[g].substr(1);
    else
      out += " + " + groups[g];
  }
  return out;
}

}  // namespace twistvo

namespace twistvo {

Scalar Scalar::galois(int k) const {
  const int D = kPhaseDen;
  Scalar r;
  for (const Term& t : terms_) {
    long j = (long(t.phase) * k) % (2 * D);
    if (j < 0) j += 2 * D;
    if (j >= D)
      r.add_term(t.pi, int(j - D), -t.c);
    else
      r.add_term(t.pi, int(j), t.c);
  }
  return r;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw EngineError("inverse of zero");
  int p = terms_.front().pi;
  for (const Term& t : terms_)
    if (t.pi != p) throw EngineError("inverse of a scalar mixing powers of Pi");
  Scalar b;
  for (const Term& t : terms_) b.add_term(0, t.phase, t.c);
  Scalar r;
  if (b.terms_.size() == 1) {
    const Term& t = b.terms_[0];
    r = expi(make_q(-t.phase, kPhaseDen)) * Scalar(Q(1 / t.c));
  } else {
    // b times the product of its nontrivial conjugates is the norm, a rational
    Scalar prod = one();
    for (int k = 3; k < 2 * kPhaseDen; k += 2) prod *= b.galois(k);
    Scalar n = b * prod;
    if (!n.is_rational()) throw EngineError("norm computation failed");
    r = prod * Scalar(Q(1 / n.rational()));
  }
  return r * pi_pow(-p);
}

}  // namespace twistvo
