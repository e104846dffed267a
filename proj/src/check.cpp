#include "twistvo/check.hpp"

namespace twistvo {

std::string vec_str(const FockSpace& F, const Vec& v) {
  if (v.is_zero()) return "0";
  std::string out;
  for (auto& [id, c] : v.entries()) {
    if (!out.empty()) out += " + ";
    if (!(c == Scalar::one())) out += "(" + c.str() + ")*";
    out += F.name(id);
  }
  return out;
}

CheckResult compare_series(const std::string& what, const std::string& inputs, const VSeries& lhs, const VSeries& rhs,
                           const Window& w, const FockSpace& F) {
  auto mm = compare_on_window(lhs, rhs, w);
  if (!mm) return std::nullopt;
  return CheckFailure{what, inputs + " at " + mm->m.str(w.mask) + ": lhs=" + vec_str(F, mm->lhs) + " rhs=" + vec_str(F, mm->rhs)};
}

}  // namespace twistvo
