#pragma once

#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "twistvo/check.hpp"
#include "twistvo/fields.hpp"
#include "twistvo/twisted_module.hpp"

namespace twistvo {

// Ytw(w,x)v = (-1)^{|v||w|} e^{x L_W(-1)} Y(v,y)w with y^n = e^{pi i n} x^n and
// log y = log x + Pi. Always evaluated from that formula; nothing is stored
// except a memo of computed coefficients.
class TwistOperator {
 public:
  explicit TwistOperator(const TwistedModule& M) : M_(M) {}
  TwistOperator(const TwistOperator&) = delete;

  const TwistedModule& module() const { return M_; }

  // coefficient of x^e (log x)^k in Ytw(w,x)v
  Vec coeff(const Vec& w, Exponent e, int k, const Vec& v) const;
  VSeries field(const Vec& w, const Vec& v, int var) const;

  // minimal M >= 0 with x^{alpha+M} Y_0(u,x)w in W[[x]]
  long commutativity_order(const Vec& u, const Vec& w) const;

  // Ytw(Y(u,x0)w, x2)v
  VSeries twist_iterate(const Vec& u, int x0, const Vec& w, int x2, const Vec& v) const;

 private:
  Vec basis_coeff(uint32_t w, Exponent e, int k, uint32_t v) const;
  // (substituted) coefficient of x^e (log x)^k in Y(v,y)w
  Vec substituted(uint32_t v, Exponent e, int k, uint32_t w) const;

  const TwistedModule& M_;
  struct Key {
    uint32_t w, v;
    int64_t e;
    int k;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const noexcept {
      return (size_t(k.w) * 1000003u) ^ (size_t(k.v) * 9176u) ^ size_t(k.e * 31 + k.k);
    }
  };
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<Key, Vec, KeyHash> memo_;
};

// Ytw(w, var) acting on V vectors whose g-weight is input_alpha
Factor twist_factor(const TwistOperator& T, const Vec& w, int var, Exponent input_alpha);

// Ytw(w,x)1 = e^{xL(-1)}w
CheckResult check_twist_vacuum(const TwistOperator& T, const Vec& w, long half_width);

// (x0+x2)^M Y(u,x0+x2) Ytw(w,x2)v = (x0+x2)^M Ytw(Y(u,x0)w,x2)v, M = M_{u,v} from V
CheckResult check_weak_associativity(const TwistOperator& T, const Vec& u, const Vec& v, const Vec& w, long half_width);

// x0^{-1}d((x1-x2)/x0)((x1-x2)/x0)^a Y(u,x1)Ytw(w,x2)v
//   - e x0^{-1}d((-x2+x1)/x0)((-x2+x1)/x0)^a Ytw(w,x2)Y_V(u,x1)v
//   = x1^{-1}d((x2+x0)/x1) Ytw(Y(u,x0)w,x2)v
CheckResult check_twist_jacobi(const TwistOperator& T, const Vec& u, const Vec& v, const Vec& w, long half_width);

// generalized commutator formula, as the x0-residue and in the finite
// delta-derivative form
CheckResult check_gen_commutator(const TwistOperator& T, const Vec& u, const Vec& v, const Vec& w, long half_width);

// generalized weak commutativity with M = max(M_{u,w}, 1), in the factored
// and the combined-exponent form
CheckResult check_gen_weak_commutativity(const TwistOperator& T, const Vec& u, const Vec& v, const Vec& w,
                                         long half_width);

// Ytw(w,x)x^{N} has no log terms and Ytw(w,x) = (Ytw)_0(w,x)x^{-N}
CheckResult check_twist_decomposition(const TwistOperator& T, const Vec& w, const Vec& v, long half_width);

// d/dx Ytw(w,x)v = Ytw(L(-1)w,x)v = L(-1)Ytw(w,x)v - Ytw(w,x)L(-1)v
CheckResult check_L_minus1_twist(const TwistOperator& T, const Vec& w, const Vec& v, long half_width);

// Y(v_1,x_1)..Y(v_k,x_k) Ytw(w,x) Y_V(r_1,z_1)..Y_V(r_l,z_l) v against
// e^{xL(-1)} Y(v_1,x_1-x)..Y(v_k,x_k-x) Y(Y_V(r_1,z_1)..Y_V(r_l,z_l)v, y)w
// with the twist substitution, k <= 2 and l <= 2
CheckResult check_mixed_product(const TwistOperator& T, const std::vector<Vec>& left, const Vec& w,
                                const std::vector<Vec>& right, const Vec& v, long half_width);

// Swap the operators in slots pos and pos+1 of
// Y(left..) Ytw(w) Y_V(right..) v, each with its own variable, and compare the
// prefactored products with the parity sign.
CheckResult check_mixed_permutation(const TwistOperator& T, const std::vector<Vec>& left, const Vec& w,
                                    const std::vector<Vec>& right, const Vec& v, int pos, long half_width);

}  // namespace twistvo
