#include "twistvo/linalg.hpp"

#include <sstream>

namespace twistvo {

Matrix Matrix::identity(size_t n) {
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = Scalar::one();
  return m;
}

bool Matrix::is_zero() const {
  for (auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

bool Matrix::is_rational() const {
  for (auto& x : a_)
    if (!x.is_rational()) return false;
  return true;
}

Matrix Matrix::operator+(const Matrix& o) const {
  Matrix r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  Matrix r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (c_ != o.r_) throw EngineError("matrix shape mismatch");
  Matrix r(r_, o.c_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t k = 0; k < c_; ++k) {
      const Scalar& x = (*this)(i, k);
      if (x.is_zero()) continue;
      for (size_t j = 0; j < o.c_; ++j) {
        const Scalar& y = o(k, j);
        if (!y.is_zero()) r(i, j) += x * y;
      }
    }
  return r;
}

Matrix Matrix::operator*(const Scalar& s) const {
  Matrix r = *this;
  for (auto& x : r.a_) x *= s;
  return r;
}

std::vector<Scalar> Matrix::apply(const std::vector<Scalar>& x) const {
  std::vector<Scalar> y(r_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < c_; ++j)
      if (!(*this)(i, j).is_zero() && !x[j].is_zero()) y[i] += (*this)(i, j) * x[j];
  return y;
}

std::string Matrix::str() const {
  std::ostringstream os;
  for (size_t i = 0; i < r_; ++i) {
    os << "[";
    for (size_t j = 0; j < c_; ++j) os << (j ? ", " : "") << (*this)(i, j).str();
    os << "]\n";
  }
  return os.str();
}

std::vector<size_t> row_reduce(Matrix& m) {
  std::vector<size_t> piv;
  size_t row = 0;
  for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    size_t p = row;
    while (p < m.rows() && m(p, col).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    Scalar inv = m(row, col).inverse();
    for (size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      Scalar f = m(i, col);
      for (size_t j = col; j < m.cols(); ++j)
        if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
    }
    piv.push_back(col);
    ++row;
  }
  return piv;
}

size_t rank(Matrix m) { return row_reduce(m).size(); }

Matrix kernel(const Matrix& m) {
  Matrix r = m;
  auto piv = row_reduce(r);
  std::vector<bool> is_piv(m.cols(), false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<size_t> free;
  for (size_t c = 0; c < m.cols(); ++c)
    if (!is_piv[c]) free.push_back(c);
  Matrix k(m.cols(), free.size());
  for (size_t f = 0; f < free.size(); ++f) {
    k(free[f], f) = Scalar::one();
    for (size_t i = 0; i < piv.size(); ++i) k(piv[i], f) = -r(i, free[f]);
  }
  return k;
}

Matrix inverse(const Matrix& m) {
  size_t n = m.rows();
  if (m.cols() != n) throw EngineError("inverse of a non-square matrix");
  Matrix aug(n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = Scalar::one();
  }
  auto piv = row_reduce(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) throw EngineError("singular matrix");
  Matrix r(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
  return r;
}

int nilpotency_index(const Matrix& m) {
  size_t n = m.rows();
  if (n == 0) return 1;
  Matrix p = m;
  for (size_t k = 1; k <= n; ++k) {
    if (p.is_zero()) return int(k);
    p = p * m;
  }
  return 0;
}

Matrix exp_nilpotent(const Matrix& m) {
  if (nilpotency_index(m) == 0) throw NotNilpotent("exponential of a non-nilpotent matrix");
  Matrix r = Matrix::identity(m.rows()), p = Matrix::identity(m.rows());
  for (long k = 1;; ++k) {
    p = p * m * Scalar(make_q(1, k));
    if (p.is_zero()) break;
    r = r + p;
  }
  return r;
}

Matrix log_unipotent(const Matrix& m) {
  if (nilpotency_index(m) == 0) throw NotNilpotent("(g - 1) is not nilpotent on the block");
  Matrix r(m.rows(), m.cols()), p = Matrix::identity(m.rows());
  for (long j = 1;; ++j) {
    p = p * m;
    if (p.is_zero()) break;
    r = r + p * Scalar(make_q(j % 2 ? 1 : -1, j));
  }
  return r;
}

}  // namespace twistvo
