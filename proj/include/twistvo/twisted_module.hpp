#pragma once

#include <memory>

#include "twistvo/automorphism.hpp"
#include "twistvo/series.hpp"
#include "twistvo/vertex.hpp"

namespace twistvo {

// Switches used only by fault injection; every one of them breaks a theorem.
struct EngineFaults {
  bool flip_iterate_sign = false;   // wrong Koszul sign in the iterate
  bool drop_twist_sign = false;     // omit (-1)^{|v||w|} in the twist operator
  bool twist_conjugate_branch = false;  // y^n = e^{-pi i n} x^n
  bool twist_negative_translation = false;  // e^{-x L(-1)} instead of e^{x L(-1)}
};

// A (generalized) g-twisted module given by its log-free part:
// Y(u,x) = Y0(x^{-N} u, x). The shipped modules have N = 0.
class TwistedModule {
 public:
  struct Parts {
    std::string name;
    std::shared_ptr<const VertexEngine> Y0;  // V acting on W, log-free part
    std::shared_ptr<const VertexEngine> YV;  // V acting on itself
    Vec omega;                               // conformal vector of V
    LinearMap N_V, N_W;                      // nilpotent parts, null when zero
    std::shared_ptr<const Automorphism> g_V, g_W;
    std::shared_ptr<const JordanDecomposition> jordan;  // of g on V, to the working cutoff
    int log_bound = 0;
    EngineFaults faults;
  };
  explicit TwistedModule(Parts p);

  const std::string& name() const { return p_.name; }
  const FockSpace& V() const { return p_.Y0->algebra(); }
  const FockSpace& W() const { return p_.Y0->module(); }
  const VertexEngine& Y0() const { return *p_.Y0; }
  const VertexEngine& YV() const { return *p_.YV; }
  const Parts& parts() const { return p_; }
  const EngineFaults& faults() const { return p_.faults; }
  int log_bound() const { return p_.log_bound; }
  bool semisimple() const { return !p_.N_V && !p_.N_W; }

  // coefficient of x^e (log x)^k in Y^g_W(u,x)w
  Vec coeff(const Vec& u, Exponent e, int k, const Vec& w) const;
  // Y_V(u,x)v at x^e
  Vec coeff_V(const Vec& u, Exponent e, const Vec& v) const { return p_.YV->coeff(u, e, v); }

  Vec N_V(const Vec& v) const { return p_.N_V ? p_.N_V(v) : Vec{}; }
  Vec N_W(const Vec& w) const { return p_.N_W ? p_.N_W(w) : Vec{}; }

  Vec L_W(int n, const Vec& w) const;  // omega_(n+1) on W
  Vec L_V(int n, const Vec& v) const;  // omega_(n+1) on V
  Exponent vacuum_weight() const;      // L_W(0) eigenvalue on the first vacuum vector

  // g-weight of a homogeneous V vector (throws if it mixes g-weights)
  Exponent alpha_of(const Vec& u) const;
  // x-exponent coset of Y(u,x)w
  Exponent exponent_coset(const Vec& u) const { return (-alpha_of(u)).residue(); }
  // lowest possible x-exponent of Y(u,x)w, from level(out) >= 0
  Exponent lowest_exponent(const Vec& u, const Vec& w) const;

  Exponent weight_V(const Vec& u) const;  // level of a homogeneous V vector
  Exponent level_W(const Vec& w) const;

  // Y(u,x)w as a series in var (vector-valued over W)
  VSeries field(const Vec& u, const Vec& w, int var) const;
  // Y_V(u,x)v as a series
  VSeries field_V(const Vec& u, const Vec& v, int var) const;

 private:
  Parts p_;
};

}  // namespace twistvo
