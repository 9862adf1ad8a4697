#include "atiyah_lab/point.hpp"

#include "atiyah_lab/errors.hpp"

namespace alab::point {

void LieAlgebra::set_bracket(std::size_t i, std::size_t j, std::size_t k, const Rational& value) {
  c(i, j, k) = value;
  c(j, i, k) = -value;
}

CEForm CEForm::zero(int degree, std::size_t q, std::size_t m) {
  CEForm f;
  f.degree = degree;
  f.q = q;
  f.m = m;
  const std::size_t nslots = degree == 0 ? 1 : degree == 1 ? q : q * q;
  f.slots.assign(nslots, Tensor3<Rational>(m, m, m, Rational(0)));
  return f;
}

bool CEForm::is_zero() const {
  for (const auto& s : slots)
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s.flat(i) != 0)
        return false;
  return true;
}

CEForm& CEForm::operator-=(const CEForm& other) {
  if (degree != other.degree || q != other.q || m != other.m)
    throw InputError("CEForm shape mismatch");
  for (std::size_t s = 0; s < slots.size(); ++s)
    for (std::size_t i = 0; i < slots[s].size(); ++i)
      slots[s].flat(i) -= other.slots[s].flat(i);
  return *this;
}

ValidationReport validate_lie_algebra(const LieAlgebra& g) {
  ValidationReport report;
  const std::size_t n = g.dim;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (g.c(i, j, k) + g.c(j, i, k) != 0)
          report.violations.push_back({"antisymmetry", {i, j, k},
                                       "c(i,j,k) + c(j,i,k) = " + to_string(Rational(g.c(i, j, k) + g.c(j, i, k)))});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        std::string detail;
        for (std::size_t l = 0; l < n; ++l) {
          Rational v = 0;
          for (std::size_t s = 0; s < n; ++s)
            v += g.c(i, j, s) * g.c(s, k, l) + g.c(j, k, s) * g.c(s, i, l) + g.c(k, i, s) * g.c(s, j, l);
          if (v != 0) {
            if (!detail.empty())
              detail += ", ";
            detail += "e" + std::to_string(l + 1) + ": " + to_string(v);
          }
        }
        if (!detail.empty())
          report.violations.push_back({"jacobi", {i, j, k}, "jacobiator = " + detail});
      }
  return report;
}

ValidationReport check_subalgebra(const LiePair& pair) {
  ValidationReport report;
  if (pair.q > pair.g.dim) {
    report.violations.push_back({"range", {pair.q}, "subalgebra rank exceeds dimension"});
    return report;
  }
  for (std::size_t i = 0; i < pair.q; ++i)
    for (std::size_t j = 0; j < pair.q; ++j)
      for (std::size_t k = pair.q; k < pair.g.dim; ++k)
        if (pair.g.c(i, j, k) != 0)
          report.violations.push_back({"closure", {i, j, k}, "[e_i, e_j] leaves J"});
  return report;
}

void require_valid_pair(const LiePair& pair) {
  if (pair.g.c.size() != pair.g.dim * pair.g.dim * pair.g.dim)
    throw PreconditionError("structure constant array does not match dimension");
  auto subalgebra = check_subalgebra(pair);
  if (!subalgebra.pass())
    throw PreconditionError("J is not a subalgebra: " + subalgebra.violations.front().detail);
  auto lie = validate_lie_algebra(pair.g);
  if (!lie.pass())
    throw PreconditionError("not a Lie algebra: " + lie.violations.front().kind + " violated");
}

std::vector<QMatrix> bott_rep(const LiePair& pair) {
  auto subalgebra = check_subalgebra(pair);
  if (!subalgebra.pass())
    throw InputError("J is not a subalgebra: " + subalgebra.violations.front().detail);
  const std::size_t q = pair.q;
  const std::size_t m = pair.quotient_dim();
  std::vector<QMatrix> out;
  for (std::size_t j = 0; j < q; ++j) {
    QMatrix b(m, m, Rational(0));
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < m; ++l)
        b(k, l) = pair.g.c(j, q + l, q + k);
    out.push_back(std::move(b));
  }
  return out;
}

PointConnection construct_default_extension(const LiePair& pair) {
  const std::size_t n = pair.g.dim;
  const std::size_t q = pair.q;
  PointConnection conn{Tensor3<Rational>(n, n, n, Rational(0))};
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t b = q; b < n; ++b)
      for (std::size_t k = q; k < n; ++k)
        conn.gamma(j, b, k) = pair.g.c(j, b, k);
  return conn;
}

ExtensionReport is_point_extension(const LiePair& pair, const PointConnection& conn) {
  const std::size_t n = pair.g.dim;
  const std::size_t q = pair.q;
  ExtensionReport report;
  if (conn.gamma.dim(0) != n || conn.gamma.dim(1) != n || conn.gamma.dim(2) != n)
    throw InputError("connection shape does not match the Lie algebra");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t j = 0; j < q; ++j)
      for (std::size_t k = q; k < n; ++k)
        if (conn.gamma(a, j, k) != 0)
          return {false, "preserves_J", {a, j, k}};
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t b = q; b < n; ++b)
      for (std::size_t k = q; k < n; ++k)
        if (conn.gamma(j, b, k) != pair.g.c(j, b, k))
          return {false, "induces_bott", {j, b, k}};
  return report;
}

namespace {

// (G_a)_{k b} = gamma(a, b, k)
std::vector<QMatrix> connection_matrices(const PointConnection& conn, std::size_t n) {
  std::vector<QMatrix> out;
  for (std::size_t a = 0; a < n; ++a) {
    QMatrix g(n, n, Rational(0));
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t k = 0; k < n; ++k)
        g(k, b) = conn.gamma(a, b, k);
    out.push_back(std::move(g));
  }
  return out;
}

// (nabla^Hom_j phi)(a1)(a2), with B the Bott matrix of e_j.
Tensor3<Rational> hom_action(const QMatrix& b, const Tensor3<Rational>& phi, std::size_t m) {
  Tensor3<Rational> out(m, m, m, Rational(0));
  for (std::size_t a1 = 0; a1 < m; ++a1)
    for (std::size_t a2 = 0; a2 < m; ++a2)
      for (std::size_t c = 0; c < m; ++c) {
        Rational v = 0;
        for (std::size_t k = 0; k < m; ++k) {
          v += b(c, k) * phi(a1, a2, k);
          v -= b(k, a1) * phi(k, a2, c);
          v -= b(k, a2) * phi(a1, k, c);
        }
        out(a1, a2, c) = v;
      }
  return out;
}

void subtract(Tensor3<Rational>& target, const Tensor3<Rational>& other, const Rational& factor = 1) {
  for (std::size_t i = 0; i < target.size(); ++i)
    target.flat(i) -= factor * other.flat(i);
}

}  // namespace

CEForm atiyah_cocycle_point(const LiePair& pair, const PointConnection& conn) {
  auto ext = is_point_extension(pair, conn);
  if (!ext.holds)
    throw PreconditionError("connection is not an extension (" + ext.failed_condition + ")");
  const std::size_t n = pair.g.dim;
  const std::size_t q = pair.q;
  const std::size_t m = pair.quotient_dim();
  const auto g = connection_matrices(conn, n);
  CEForm out = CEForm::zero(1, q, m);
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t a = 0; a < m; ++a) {
      QMatrix r = g[j] * g[q + a] - g[q + a] * g[j];
      for (std::size_t i = 0; i < n; ++i) {
        const Rational& coeff = pair.g.c(j, q + a, i);
        if (coeff == 0)
          continue;
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y)
            r(x, y) -= coeff * g[i](x, y);
      }
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t c = 0; c < m; ++c)
          out.slots[j](a, b, c) = r(q + c, q + b);
    }
  return out;
}

CEForm ce_differential(const LiePair& pair, const CEForm& form) {
  const std::size_t q = pair.q;
  const std::size_t m = pair.quotient_dim();
  if (form.q != q || form.m != m)
    throw InputError("form shape does not match the pair");
  if (form.degree < 0 || form.degree > 1)
    throw InputError("ce_differential: unsupported degree " + std::to_string(form.degree));
  const auto bott = bott_rep(pair);
  if (form.degree == 0) {
    CEForm out = CEForm::zero(1, q, m);
    for (std::size_t j = 0; j < q; ++j)
      out.slots[j] = hom_action(bott[j], form.slots[0], m);
    return out;
  }
  CEForm out = CEForm::zero(2, q, m);
  for (std::size_t j1 = 0; j1 < q; ++j1)
    for (std::size_t j2 = 0; j2 < q; ++j2) {
      Tensor3<Rational> v = hom_action(bott[j1], form.slots[j2], m);
      subtract(v, hom_action(bott[j2], form.slots[j1], m));
      for (std::size_t k = 0; k < q; ++k)
        if (pair.g.c(j1, j2, k) != 0)
          subtract(v, form.slots[k], pair.g.c(j1, j2, k));
      out.slots[j1 * q + j2] = std::move(v);
    }
  return out;
}

CEForm extension_difference(const LiePair& pair, const PointConnection& conn1, const PointConnection& conn2) {
  const std::size_t q = pair.q;
  const std::size_t m = pair.quotient_dim();
  CEForm out = CEForm::zero(0, q, m);
  for (std::size_t a1 = 0; a1 < m; ++a1)
    for (std::size_t a2 = 0; a2 < m; ++a2)
      for (std::size_t c = 0; c < m; ++c)
        out.slots[0](a1, a2, c) = conn1.gamma(q + a1, q + a2, q + c) - conn2.gamma(q + a1, q + a2, q + c);
  return out;
}

QVector flatten(const CEForm& form) {
  QVector out;
  for (const auto& s : form.slots)
    for (std::size_t i = 0; i < s.size(); ++i)
      out.push_back(s.flat(i));
  return out;
}

CEForm unflatten(const QVector& values, int degree, std::size_t q, std::size_t m) {
  CEForm out = CEForm::zero(degree, q, m);
  std::size_t total = 0;
  for (const auto& s : out.slots)
    total += s.size();
  if (total != values.size())
    throw InputError("unflatten: length mismatch");
  std::size_t idx = 0;
  for (auto& s : out.slots)
    for (std::size_t i = 0; i < s.size(); ++i)
      s.flat(i) = values[idx++];
  return out;
}

PairDecision atiyah_class_decide(const LiePair& pair, const PointConnection& conn) {
  require_valid_pair(pair);
  const std::size_t q = pair.q;
  const std::size_t m = pair.quotient_dim();
  PairDecision out;
  out.cocycle = atiyah_cocycle_point(pair, conn);
  if (!ce_differential(pair, out.cocycle).is_zero())
    throw InternalError("Atiyah cocycle of a valid pair is not closed");

  const std::size_t unknowns = m * m * m;
  out.rhs = flatten(out.cocycle);
  out.system = QMatrix(out.rhs.size(), unknowns, Rational(0));
  QVector unit(unknowns, Rational(0));
  for (std::size_t u = 0; u < unknowns; ++u) {
    unit[u] = 1;
    const QVector column = flatten(ce_differential(pair, unflatten(unit, 0, q, m)));
    unit[u] = 0;
    for (std::size_t r = 0; r < column.size(); ++r)
      out.system(r, u) = column[r];
  }

  SolveResult solved = linear_solve(out.system, out.rhs);
  if (solved.solvable) {
    out.vanishes = true;
    out.primitive = unflatten(solved.solution, 0, q, m);
    if (!(ce_differential(pair, out.primitive) == out.cocycle))
      throw InternalError("primitive does not reproduce the cocycle");
  } else {
    out.certificate = std::move(solved.certificate);
    const QVector left = vec_mat(out.certificate, out.system);
    for (const auto& v : left)
      if (v != 0)
        throw InternalError("certificate is not in the left kernel");
    if (dot(out.certificate, out.rhs) == 0)
      throw InternalError("certificate does not separate the right-hand side");
  }
  return out;
}

PairDecision atiyah_class_decide(const LiePair& pair) {
  require_valid_pair(pair);
  return atiyah_class_decide(pair, construct_default_extension(pair));
}

bool naive_ideal_check(const LiePair& pair) {
  for (std::size_t a = 0; a < pair.g.dim; ++a)
    for (std::size_t i = 0; i < pair.q; ++i)
      for (std::size_t k = pair.q; k < pair.g.dim; ++k)
        if (pair.g.c(a, i, k) != 0)
          return false;
  return true;
}

}  // namespace alab::point
