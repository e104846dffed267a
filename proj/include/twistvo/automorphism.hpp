#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twistvo/check.hpp"
#include "twistvo/fock.hpp"
#include "twistvo/linalg.hpp"
#include "twistvo/vertex.hpp"

namespace twistvo {

// Automorphism induced by a linear map on the generators: each mode a(n) goes
// to sum_b g_ba b(n), and the vacuum space is acted on by vac_matrix.
class Automorphism {
 public:
  Automorphism(std::shared_ptr<const FockSpace> space, Matrix on_generators, std::optional<Matrix> on_vacuum = std::nullopt);

  const FockSpace& space() const { return *F_; }
  const Matrix& on_generators() const { return g_; }
  Vec apply(const Vec& v) const;
  Vec apply(uint32_t s) const { return apply(Vec::basis(s)); }
  // matrix of g on the level-l subspace in the basis F.basis_at(l)
  Matrix block(Exponent level) const;
  // Exact Gram-form preservation g^T G g = G; throws NotIsometry.
  void require_isometry() const;

 private:
  std::shared_ptr<const FockSpace> F_;
  Matrix g_, vac_;
};

// e^{2 pi i alpha} for alpha in (1/128)Z
Scalar root_of_unity(Exponent alpha);
// alpha in [0,1) with e^{2 pi i alpha} = z, throws NonCyclotomicSpectrum
Exponent alpha_of_root(const Scalar& z);

struct JordanBlock {
  Exponent level;
  std::vector<uint32_t> basis;
  Matrix g;
  Matrix semisimple;  // e^{2 pi i S}
  Matrix two_pi_i_N;  // 2 pi i N, rational when g is
  std::map<Exponent, Matrix> projector;  // onto V^{[alpha]} within the block
  int nilpotency_index = 1;              // of N on the block
};

struct JordanDecomposition {
  std::vector<JordanBlock> blocks;
  std::vector<Exponent> spectrum;  // P_V, ascending
  const JordanBlock* block_of(uint32_t id) const;
  // position of a basis id inside its block
  std::map<uint32_t, std::pair<size_t, size_t>> index;

  // semisimple, nilpotent (as 2 pi i N) and projections acting on vectors
  Vec apply_semisimple(const Vec& v) const;
  Vec apply_two_pi_i_N(const Vec& v) const;
  Vec apply_N(const Vec& v) const;  // N itself, carrying 1/(2 Pi)
  std::map<Exponent, Vec> alpha_decompose(const Vec& v) const;
  bool nilpotent_part_is_zero() const;
};

// Decomposition of one block given candidate eigenvalues (as g-weights).
JordanBlock decompose_block(const Matrix& g, const std::vector<Exponent>& candidates);
// Generalized eigenvalues of g on the generators, closed under products.
std::vector<Exponent> spectrum_candidates(const Matrix& g_gen);
JordanDecomposition jordan_decompose(const Automorphism& g, Exponent weight_cutoff);

// [N, Y(u,x)] v = Y(N u, x) v on all basis pairs up to the cutoff.
CheckResult check_derivation(const VertexEngine& V, const JordanDecomposition& J, Exponent weight_cutoff, long half_width);
// x0^N Y(u,x) v = Y(x0^N u, x) x0^N v
CheckResult check_conjugation(const VertexEngine& V, const JordanDecomposition& J, Exponent weight_cutoff, long half_width);
// g Y(u,x) v = Y(gu, x) gv for an arbitrary linear map on V
CheckResult check_homomorphism(const VertexEngine& V, const LinearMap& g, Exponent weight_cutoff, long half_width);
// S and N commute on every block
bool semisimple_nilpotent_commute(const JordanDecomposition& J);

}  // namespace twistvo
