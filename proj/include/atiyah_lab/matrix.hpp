#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "atiyah_lab/errors.hpp"
#include "atiyah_lab/poly.hpp"
#include "atiyah_lab/rational.hpp"

namespace alab {

/// Dense row-major matrix. Entries default to a stored zero element so that
/// Poly matrices carry their variable count even when empty of terms.
template <typename T>
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& zero = T())
      : rows_(rows), cols_(cols), zero_(zero), data_(rows * cols, zero) {}

  static Matrix identity(std::size_t n, const T& zero, const T& one) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = one;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const T& zero() const { return zero_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_zero() const {
    for (const auto& v : data_)
      if (!(v == zero_))
        return false;
    return true;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i)
      data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i)
      data_[i] -= o.data_[i];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  Matrix operator-() const {
    Matrix out(rows_, cols_, zero_);
    for (std::size_t i = 0; i < data_.size(); ++i)
      out.data_[i] = -data_[i];
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw InputError("matrix product shape mismatch: " + a.shape() + " * " + b.shape());
    Matrix out(a.rows_, b.cols_, a.zero_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == a.zero_)
          continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  /// Copy of rows [r0, r0+nr) and columns [c0, c0+nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix out(nr, nc, zero_);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j)
        out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j)
        (*this)(r0 + i, c0 + j) = b(i, j);
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw InputError("matrix shape mismatch: " + shape() + " vs " + o.shape());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  T zero_{};
  std::vector<T> data_;
};

using QMatrix = Matrix<Rational>;
using PolyMatrix = Matrix<Poly>;
using QVector = std::vector<Rational>;

inline PolyMatrix poly_zero_matrix(std::size_t rows, std::size_t cols, std::size_t nvars) {
  return PolyMatrix(rows, cols, Poly(nvars));
}

inline PolyMatrix poly_identity(std::size_t n, std::size_t nvars) {
  return PolyMatrix::identity(n, Poly(nvars), Poly::constant(nvars, Rational(1)));
}

/// Entrywise partial derivative.
PolyMatrix derivative(const PolyMatrix& m, std::size_t var);

/// Laplace-expansion determinant (sizes here stay tiny).
Poly determinant(const PolyMatrix& m);

}  // namespace alab
