#pragma once

#include <string>
#include <vector>

#include "twistvo/scalar.hpp"
#include "twistvo/vec.hpp"

namespace twistvo {

// Small dense matrix over Scalar. Row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t r, size_t c) : r_(r), c_(c), a_(r * c) {}
  static Matrix identity(size_t n);

  size_t rows() const { return r_; }
  size_t cols() const { return c_; }
  Scalar& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
  const Scalar& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }

  bool is_zero() const;
  bool is_rational() const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator*(const Scalar& s) const;
  friend bool operator==(const Matrix& a, const Matrix& b) { return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_; }

  std::vector<Scalar> apply(const std::vector<Scalar>& x) const;
  std::string str() const;

 private:
  size_t r_ = 0, c_ = 0;
  std::vector<Scalar> a_;
};

// Row reduction in place; returns pivot columns.
std::vector<size_t> row_reduce(Matrix& m);
size_t rank(Matrix m);
// Columns form a basis of the null space.
Matrix kernel(const Matrix& m);
// Throws EngineError when singular.
Matrix inverse(const Matrix& m);
// Smallest k >= 1 with m^k = 0, or 0 if m is not nilpotent within its size.
int nilpotency_index(const Matrix& m);
// Exact exponential of a nilpotent matrix; throws NotNilpotent otherwise.
Matrix exp_nilpotent(const Matrix& m);
// log(1 + m) for nilpotent m as the finite alternating series.
Matrix log_unipotent(const Matrix& m);

}  // namespace twistvo
