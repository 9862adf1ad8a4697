#include "atiyah_lab/linsolve.hpp"

#include <map>
#include <optional>
#include <utility>

namespace alab {

namespace {

using SparseRow = std::map<std::size_t, Rational>;

void axpy(SparseRow& target, const Rational& factor, const SparseRow& source) {
  for (const auto& [col, v] : source) {
    auto [it, inserted] = target.try_emplace(col, 0);
    it->second -= factor * v;
    if (it->second == 0)
      target.erase(it);
  }
}

struct Reduced {
  std::vector<SparseRow> rows;
  std::vector<std::size_t> pivot_cols;  // pivot column of rows[0..rank)
};

// Reduced row echelon form over the first `ncols` columns; columns beyond
// that (right-hand side, row tracking) are carried along.
Reduced rref(std::vector<SparseRow> rows, std::size_t ncols) {
  Reduced out;
  std::size_t next = 0;
  for (std::size_t col = 0; col < ncols && next < rows.size(); ++col) {
    std::optional<std::size_t> pivot;
    for (std::size_t r = next; r < rows.size(); ++r) {
      auto it = rows[r].find(col);
      if (it != rows[r].end()) {
        pivot = r;
        break;
      }
    }
    if (!pivot)
      continue;
    std::swap(rows[next], rows[*pivot]);
    SparseRow& prow = rows[next];
    const Rational inv = 1 / prow.at(col);
    for (auto& [c, v] : prow)
      v *= inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == next)
        continue;
      auto it = rows[r].find(col);
      if (it == rows[r].end())
        continue;
      const Rational factor = it->second;
      axpy(rows[r], factor, prow);
    }
    out.pivot_cols.push_back(col);
    ++next;
  }
  out.rows = std::move(rows);
  return out;
}

std::vector<SparseRow> to_sparse(const QMatrix& a) {
  std::vector<SparseRow> rows(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0)
        rows[i].emplace(j, a(i, j));
  return rows;
}

}  // namespace

SolveResult linear_solve(const QMatrix& a, const QVector& b) {
  if (a.rows() != b.size())
    throw InputError("linear_solve: matrix has " + std::to_string(a.rows()) + " rows but right-hand side has " +
                     std::to_string(b.size()) + " entries");
  const std::size_t n = a.cols();
  std::vector<SparseRow> rows = to_sparse(a);
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (b[i] != 0)
      rows[i].emplace(n, b[i]);

  Reduced red = rref(rows, n);
  const std::size_t rk = red.pivot_cols.size();
  bool consistent = true;
  for (std::size_t r = rk; r < red.rows.size(); ++r)
    if (!red.rows[r].empty())
      consistent = false;

  SolveResult result;
  if (consistent) {
    result.solvable = true;
    result.solution.assign(n, Rational(0));
    for (std::size_t r = 0; r < rk; ++r) {
      auto it = red.rows[r].find(n);
      if (it != red.rows[r].end())
        result.solution[red.pivot_cols[r]] = it->second;
    }
    return result;
  }

  // Redo with row tracking: columns n+1+i record the combination of input rows.
  for (std::size_t i = 0; i < rows.size(); ++i)
    rows[i].emplace(n + 1 + i, Rational(1));
  red = rref(std::move(rows), n);
  for (std::size_t r = red.pivot_cols.size(); r < red.rows.size(); ++r) {
    const SparseRow& row = red.rows[r];
    if (row.empty() || row.begin()->first != n)
      continue;
    result.certificate.assign(a.rows(), Rational(0));
    for (const auto& [col, v] : row)
      if (col > n)
        result.certificate[col - n - 1] = v;
    return result;
  }
  throw InternalError("linear_solve: inconsistent system without a certificate row");
}

std::vector<QVector> kernel_basis(const QMatrix& a) {
  const std::size_t n = a.cols();
  Reduced red = rref(to_sparse(a), n);
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : red.pivot_cols)
    is_pivot[c] = true;
  std::vector<QVector> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free])
      continue;
    QVector v(n, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < red.pivot_cols.size(); ++r) {
      auto it = red.rows[r].find(free);
      if (it != red.rows[r].end())
        v[red.pivot_cols[r]] = -it->second;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank(const QMatrix& a) { return rref(to_sparse(a), a.cols()).pivot_cols.size(); }

QVector mat_vec(const QMatrix& a, const QVector& x) {
  if (a.cols() != x.size())
    throw InputError("mat_vec: shape mismatch");
  QVector out(a.rows(), Rational(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      out[i] += a(i, j) * x[j];
  return out;
}

QVector vec_mat(const QVector& y, const QMatrix& a) {
  if (a.rows() != y.size())
    throw InputError("vec_mat: shape mismatch");
  QVector out(a.cols(), Rational(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (y[i] == 0)
      continue;
    for (std::size_t j = 0; j < a.cols(); ++j)
      out[j] += y[i] * a(i, j);
  }
  return out;
}

Rational dot(const QVector& a, const QVector& b) {
  if (a.size() != b.size())
    throw InputError("dot: length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

}  // namespace alab
