#include "atiyah_lab/matrix.hpp"

namespace alab {

PolyMatrix derivative(const PolyMatrix& m, std::size_t var) {
  PolyMatrix out(m.rows(), m.cols(), m.zero());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(i, j) = poly_diff(m(i, j), var);
  return out;
}

Poly determinant(const PolyMatrix& m) {
  if (m.rows() != m.cols())
    throw InputError("determinant of non-square matrix " + m.shape());
  const std::size_t n = m.rows();
  if (n == 0)
    return Poly::constant(m.zero().nvars(), Rational(1));
  if (n == 1)
    return m(0, 0);
  Poly det = m.zero();
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j).is_zero())
      continue;
    PolyMatrix minor(n - 1, n - 1, m.zero());
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t k = 0, c = 0; k < n; ++k)
        if (k != j)
          minor(i - 1, c++) = m(i, k);
    Poly term = m(0, j) * determinant(minor);
    if (j % 2 == 0)
      det += term;
    else
      det -= term;
  }
  return det;
}

}  // namespace alab
