#pragma once

#include <optional>
#include <string>

#include "twistvo/fock.hpp"
#include "twistvo/series.hpp"

namespace twistvo {

struct CheckFailure {
  std::string what;
  std::string where;
};
using CheckResult = std::optional<CheckFailure>;

// "2*psi(-1)v+ + -1/2*v-" style rendering, deterministic
std::string vec_str(const FockSpace& F, const Vec& v);

// Compare two vector series on a window; on mismatch, report the monomial
// and both coefficients.
CheckResult compare_series(const std::string& what, const std::string& inputs, const VSeries& lhs, const VSeries& rhs,
                           const Window& w, const FockSpace& F);

}  // namespace twistvo
