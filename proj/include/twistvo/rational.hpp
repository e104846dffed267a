#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace twistvo {

using Q = mpq_class;

// Thrown by checks that need an exact condition the input does not satisfy.
struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonCyclotomicSpectrum : EngineError {
  using EngineError::EngineError;
};
struct NotNilpotent : EngineError {
  using EngineError::EngineError;
};
struct NotIsometry : EngineError {
  using EngineError::EngineError;
};
struct InfiniteConvolution : EngineError {
  using EngineError::EngineError;
};
struct NonMeromorphicVariable : EngineError {
  using EngineError::EngineError;
};
struct LogBoundExceeded : EngineError {
  using EngineError::EngineError;
};
struct ExtensionInconsistent : EngineError {
  using EngineError::EngineError;
};

inline Q make_q(long num, long den = 1) {
  Q q(num, den);
  q.canonicalize();
  return q;
}

Q parse_q(const std::string& s);
std::string q_str(const Q& q);

// Generalized binomial coefficient C(a, n) for rational a and n >= 0.
Q binom(const Q& a, long n);
Q factorial(long n);

bool is_integer(const Q& q);
long q_to_long(const Q& q);

}  // namespace twistvo
