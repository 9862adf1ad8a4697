#pragma once

#include <cstddef>
#include <vector>

#include "atiyah_lab/matrix.hpp"

namespace alab {

/// Outcome of an exact solve of A x = b. Exactly one of the two branches is
/// meaningful, selected by `solvable`.
struct SolveResult {
  bool solvable = false;
  QVector solution;     ///< A * solution == b
  QVector certificate;  ///< certificate^T A == 0 and certificate^T b != 0
};

/// Gauss-Jordan elimination with first-nonzero pivoting. Free variables of a
/// consistent system are set to zero.
SolveResult linear_solve(const QMatrix& a, const QVector& b);

/// Basis of the right kernel, one vector per free column of the reduced
/// echelon form (that free coordinate set to 1).
std::vector<QVector> kernel_basis(const QMatrix& a);

std::size_t rank(const QMatrix& a);

QVector mat_vec(const QMatrix& a, const QVector& x);
/// y^T A as a row.
QVector vec_mat(const QVector& y, const QMatrix& a);
Rational dot(const QVector& a, const QVector& b);

}  // namespace alab
