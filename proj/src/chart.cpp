#include "atiyah_lab/chart.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <utility>

#include "atiyah_lab/errors.hpp"
#include "atiyah_lab/linsolve.hpp"

namespace alab::chart {

namespace {

std::string idx(std::size_t i) { return std::to_string(i + 1); }

PolyMatrix commutator(const PolyMatrix& a, const PolyMatrix& b) { return a * b - b * a; }

PolyMatrix apply_field(const VectorField& x, const PolyMatrix& m) {
  PolyMatrix out(m.rows(), m.cols(), m.zero());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(i, j) = apply_vector_field(x, m(i, j));
  return out;
}

PolyMatrix quotient_block(const PolyMatrix& gamma, std::size_t q) {
  const std::size_t m = gamma.rows() - q;
  return gamma.block(q, q, m, m);
}

VectorField anchor_column(const Algebroid& alg, std::size_t i) {
  VectorField x;
  for (std::size_t mu = 0; mu < alg.nvars; ++mu)
    x.push_back(alg.anchor(mu, i));
  return x;
}

void require_square_poly(const PolyMatrix& m, std::size_t size, std::size_t nvars, const std::string& what) {
  if (m.rows() != size || m.cols() != size)
    throw InputError(what + " has shape " + m.shape() + ", expected " + std::to_string(size) + "x" +
                     std::to_string(size));
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j)
      if (m(i, j).nvars() != nvars)
        throw InputError(what + " has entries over the wrong number of variables");
}

void check_connection_shape(const IisData& data, const FullConnection& conn) {
  if (conn.gamma.size() != data.alg.nvars)
    throw InputError("connection needs one matrix per chart variable");
  for (std::size_t mu = 0; mu < conn.gamma.size(); ++mu)
    require_square_poly(conn.gamma[mu], data.alg.rank, data.alg.nvars, "connection matrix " + idx(mu));
}

}  // namespace

// --- forms -------------------------------------------------------------------

Algebroid Algebroid::zero(std::size_t nvars, std::size_t rank) {
  Algebroid a;
  a.nvars = nvars;
  a.rank = rank;
  a.anchor = poly_zero_matrix(nvars, rank, nvars);
  a.structfn = Tensor3<Poly>(rank, rank, rank, Poly(nvars));
  return a;
}

void Algebroid::set_bracket(std::size_t i, std::size_t j, std::size_t k, const Poly& f) {
  structfn(i, j, k) = f;
  structfn(j, i, k) = -f;
}

IisForm IisForm::zero(int degree, std::size_t p, std::size_t nvars, std::size_t m) {
  IisForm f;
  f.degree = degree;
  f.p = p;
  f.nvars = nvars;
  f.m = m;
  const std::size_t nslots = degree == 0 ? 1 : degree == 1 ? p : p * p;
  f.slots.assign(nslots, std::vector<PolyMatrix>(nvars - p, poly_zero_matrix(m, m, nvars)));
  return f;
}

bool IisForm::is_zero() const {
  for (const auto& s : slots)
    for (const auto& mat : s)
      if (!mat.is_zero())
        return false;
  return true;
}

int IisForm::max_degree() const {
  int d = -1;
  for (const auto& s : slots)
    for (const auto& mat : s)
      for (std::size_t i = 0; i < mat.rows(); ++i)
        for (std::size_t j = 0; j < mat.cols(); ++j)
          d = std::max(d, mat(i, j).degree());
  return d;
}

IisForm& IisForm::operator-=(const IisForm& other) {
  if (degree != other.degree || p != other.p || nvars != other.nvars || m != other.m)
    throw InputError("IisForm shape mismatch");
  for (std::size_t s = 0; s < slots.size(); ++s)
    for (std::size_t t = 0; t < slots[s].size(); ++t)
      slots[s][t] -= other.slots[s][t];
  return *this;
}

PairForm PairForm::zero(int degree, std::size_t q, std::size_t m, std::size_t nvars) {
  PairForm f;
  f.degree = degree;
  f.q = q;
  f.m = m;
  f.nvars = nvars;
  const std::size_t nslots = degree == 0 ? 1 : degree == 1 ? q : q * q;
  f.slots.assign(nslots, Tensor3<Poly>(m, m, m, Poly(nvars)));
  return f;
}

bool PairForm::is_zero() const {
  for (const auto& s : slots)
    for (std::size_t i = 0; i < s.size(); ++i)
      if (!s.flat(i).is_zero())
        return false;
  return true;
}

// --- algebroid structure -------------------------------------------------------

Poly apply_vector_field(const VectorField& x, const Poly& f) {
  if (x.size() != f.nvars())
    throw InputError("vector field and function live on charts of different dimension");
  Poly out(f.nvars());
  for (std::size_t mu = 0; mu < x.size(); ++mu)
    if (!x[mu].is_zero())
      out += x[mu] * f.derivative(mu);
  return out;
}

VectorField vector_field_bracket(const VectorField& x, const VectorField& y) {
  if (x.size() != y.size())
    throw InputError("vector fields of different dimension");
  VectorField out;
  for (std::size_t nu = 0; nu < x.size(); ++nu)
    out.push_back(apply_vector_field(x, y[nu]) - apply_vector_field(y, x[nu]));
  return out;
}

VectorField anchor_of(const Algebroid& alg, const PolySection& s) {
  if (s.size() != alg.rank)
    throw InputError("section has " + std::to_string(s.size()) + " entries, rank is " + std::to_string(alg.rank));
  VectorField out(alg.nvars, alg.zero_poly());
  for (std::size_t mu = 0; mu < alg.nvars; ++mu)
    for (std::size_t i = 0; i < alg.rank; ++i)
      if (!s[i].is_zero() && !alg.anchor(mu, i).is_zero())
        out[mu] += alg.anchor(mu, i) * s[i];
  return out;
}

PolySection frame_section(const Algebroid& alg, std::size_t i) {
  PolySection s(alg.rank, alg.zero_poly());
  s.at(i) = Poly::constant(alg.nvars, Rational(1));
  return s;
}

PolySection bracket_sections(const Algebroid& alg, const PolySection& a, const PolySection& b) {
  if (a.size() != alg.rank || b.size() != alg.rank)
    throw InputError("bracket_sections: sections must have rank " + std::to_string(alg.rank) + " entries");
  for (std::size_t i = 0; i < alg.rank; ++i)
    if (a[i].nvars() != alg.nvars || b[i].nvars() != alg.nvars)
      throw InputError("bracket_sections: coefficient over the wrong number of variables");
  PolySection out(alg.rank, alg.zero_poly());
  for (std::size_t i = 0; i < alg.rank; ++i) {
    if (a[i].is_zero())
      continue;
    for (std::size_t j = 0; j < alg.rank; ++j) {
      if (b[j].is_zero())
        continue;
      const Poly ab = a[i] * b[j];
      for (std::size_t k = 0; k < alg.rank; ++k)
        if (!alg.structfn(i, j, k).is_zero())
          out[k] += ab * alg.structfn(i, j, k);
    }
  }
  const VectorField ra = anchor_of(alg, a);
  const VectorField rb = anchor_of(alg, b);
  for (std::size_t k = 0; k < alg.rank; ++k) {
    out[k] += apply_vector_field(ra, b[k]);
    out[k] -= apply_vector_field(rb, a[k]);
  }
  return out;
}

namespace {

bool shapes_ok(const Algebroid& alg, ValidationReport& report) {
  bool ok = alg.anchor.rows() == alg.nvars && alg.anchor.cols() == alg.rank;
  ok = ok && alg.structfn.dim(0) == alg.rank && alg.structfn.dim(1) == alg.rank && alg.structfn.dim(2) == alg.rank;
  if (ok) {
    for (std::size_t i = 0; i < alg.anchor.rows(); ++i)
      for (std::size_t j = 0; j < alg.anchor.cols(); ++j)
        ok = ok && alg.anchor(i, j).nvars() == alg.nvars;
    for (std::size_t i = 0; i < alg.structfn.size(); ++i)
      ok = ok && alg.structfn.flat(i).nvars() == alg.nvars;
  }
  if (!ok)
    report.violations.push_back({"shape", {}, "anchor or structure functions do not match nvars/rank"});
  return ok;
}

}  // namespace

ValidationReport validate_chart_algebroid(const Algebroid& alg) {
  ValidationReport report;
  if (!shapes_ok(alg, report))
    return report;
  const std::size_t r = alg.rank;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j)
      for (std::size_t k = 0; k < r; ++k) {
        const Poly s = alg.structfn(i, j, k) + alg.structfn(j, i, k);
        if (!s.is_zero())
          report.violations.push_back({"antisymmetry", {i, j, k}, "c(i,j,k) + c(j,i,k) = " + s.to_string()});
      }
  std::vector<PolySection> frame;
  for (std::size_t i = 0; i < r; ++i)
    frame.push_back(frame_section(alg, i));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j)
      for (std::size_t k = j + 1; k < r; ++k) {
        PolySection t1 = bracket_sections(alg, bracket_sections(alg, frame[i], frame[j]), frame[k]);
        const PolySection t2 = bracket_sections(alg, bracket_sections(alg, frame[j], frame[k]), frame[i]);
        const PolySection t3 = bracket_sections(alg, bracket_sections(alg, frame[k], frame[i]), frame[j]);
        std::string detail;
        for (std::size_t l = 0; l < r; ++l) {
          const Poly v = t1[l] + t2[l] + t3[l];
          if (!v.is_zero())
            detail += (detail.empty() ? "e" : ", e") + idx(l) + ": " + v.to_string();
        }
        if (!detail.empty())
          report.violations.push_back({"jacobi", {i, j, k}, "jacobiator = " + detail});
      }
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      const VectorField lhs = anchor_of(alg, bracket_sections(alg, frame[i], frame[j]));
      const VectorField rhs = vector_field_bracket(anchor_column(alg, i), anchor_column(alg, j));
      for (std::size_t nu = 0; nu < alg.nvars; ++nu)
        if (!(lhs[nu] == rhs[nu]))
          report.violations.push_back({"anchor_morphism", {i, j, nu},
                                       "rho[e_i,e_j] has d" + idx(nu) + "-component " + lhs[nu].to_string() +
                                           ", [rho e_i, rho e_j] has " + rhs[nu].to_string()});
    }
  return report;
}

ValidationReport validate_iis_data(const IisData& data) {
  ValidationReport report = validate_chart_algebroid(data.alg);
  if (!report.pass())
    return report;
  const Algebroid& alg = data.alg;
  if (data.p > alg.nvars || data.q > alg.rank) {
    report.violations.push_back({"range", {data.p, data.q}, "p must be <= nvars and q <= rank"});
    return report;
  }
  const std::size_t m = data.m();
  bool shapes = data.christoffel.size() == data.p;
  for (const auto& g : data.christoffel)
    shapes = shapes && g.rows() == m && g.cols() == m && g.zero().nvars() == alg.nvars;
  if (data.flat_frame)
    shapes = shapes && data.flat_frame->rows() == m && data.flat_frame->cols() == m &&
             data.flat_frame->zero().nvars() == alg.nvars;
  if (!shapes) {
    report.violations.push_back({"shape", {}, "christoffel needs p matrices of size (rank-q)x(rank-q)"});
    return report;
  }
  for (std::size_t nu = data.p; nu < alg.nvars; ++nu)
    for (std::size_t j = 0; j < data.q; ++j)
      if (!alg.anchor(nu, j).is_zero())
        report.violations.push_back({"anchor_J", {nu, j}, "rho(e_j) has transverse component " +
                                                               alg.anchor(nu, j).to_string()});
  for (std::size_t i = 0; i < data.q; ++i)
    for (std::size_t j = 0; j < data.q; ++j)
      for (std::size_t k = data.q; k < alg.rank; ++k)
        if (!alg.structfn(i, j, k).is_zero())
          report.violations.push_back({"closure", {i, j, k}, "[e_i, e_j] leaves J"});
  for (std::size_t mu = 0; mu < data.p; ++mu)
    for (std::size_t nu = mu + 1; nu < data.p; ++nu) {
      const PolyMatrix curv = derivative(data.christoffel[nu], mu) - derivative(data.christoffel[mu], nu) +
                              commutator(data.christoffel[mu], data.christoffel[nu]);
      if (!curv.is_zero())
        report.violations.push_back({"flatness", {mu, nu}, "curvature of the partial connection is nonzero"});
    }
  return report;
}

// --- flat frames -----------------------------------------------------------------

void verify_flat_frame(const IisData& data) {
  if (!data.flat_frame)
    throw InputError("no flat frame supplied");
  const PolyMatrix& phi = *data.flat_frame;
  require_square_poly(phi, data.m(), data.alg.nvars, "flat_frame");
  for (std::size_t mu = 0; mu < data.p; ++mu) {
    const PolyMatrix residual = derivative(phi, mu) + data.christoffel[mu] * phi;
    if (!residual.is_zero())
      throw InputError("flat_frame is not parallel along d" + idx(mu));
  }
  const Poly det = determinant(phi);
  if (det.is_zero() || !det.is_constant())
    throw InputError("flat_frame determinant " + det.to_string() + " is not a nonzero constant");
}

PolyMatrix power_series_frame(const IisData& data, int degree_bound) {
  const std::size_t n = data.alg.nvars;
  const std::size_t m = data.m();
  PolyMatrix phi = poly_identity(m, n);
  for (std::size_t step = data.p; step-- > 0;) {
    PolyMatrix g = data.christoffel[step];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t v = 0; v < step; ++v)
          g(i, j) = g(i, j).at_zero(v);
    const PolyMatrix initial = phi;
    PolyMatrix iterate = initial;
    for (int it = 0; it <= degree_bound; ++it) {
      const PolyMatrix rhs = g * iterate;
      PolyMatrix next = initial;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
          next(i, j) = (next(i, j) - rhs(i, j).antiderivative(step)).truncated(degree_bound);
      iterate = std::move(next);
    }
    phi = std::move(iterate);
  }
  return phi;
}

bool rho_j_spans_fm(const IisData& data) {
  const std::size_t p = data.p;
  const std::size_t q = data.q;
  if (p == 0)
    return true;
  if (q < p)
    return false;
  std::vector<bool> choose(q, false);
  std::fill(choose.begin(), choose.begin() + static_cast<std::ptrdiff_t>(p), true);
  do {
    PolyMatrix minor = poly_zero_matrix(p, p, data.alg.nvars);
    for (std::size_t j = 0, c = 0; j < q; ++j)
      if (choose[j]) {
        for (std::size_t mu = 0; mu < p; ++mu)
          minor(mu, c) = data.alg.anchor(mu, j);
        ++c;
      }
    const Poly det = determinant(minor);
    if (!det.is_zero() && det.is_constant())
      return true;
  } while (std::prev_permutation(choose.begin(), choose.end()));
  return false;
}

namespace {

// Exact verdicts for verified frames; for a truncated frame only coefficients
// of degree <= reliable are trusted.
struct Judge {
  bool exact;
  int reliable;
  bool failed = false;
  bool unknown = false;

  void look(const Poly& residual) {
    if (!exact)
      unknown = true;
    if (residual.is_zero())
      return;
    if (exact) {
      failed = true;
      return;
    }
    const auto& lowest = residual.terms().begin()->first;
    int deg = 0;
    for (unsigned e : lowest)
      deg += static_cast<int>(e);
    if (deg <= reliable)
      failed = true;
  }

  std::string verdict() const { return failed ? "fail" : unknown ? "truncated" : "pass"; }
};

}  // namespace

IisCheck check_iis(const IisData& data, int degree_bound) {
  const ValidationReport valid = validate_iis_data(data);
  if (!valid.pass())
    throw PreconditionError("iis data invalid: " + valid.violations.front().kind + " (" +
                            valid.violations.front().detail + ")");
  const Algebroid& alg = data.alg;
  const std::size_t n = alg.nvars;
  const std::size_t p = data.p;
  const std::size_t q = data.q;
  const std::size_t m = data.m();
  IisCheck out;
  out.rho_j_spans_fm = rho_j_spans_fm(data);

  // iis1': class [e_j, e_b] equals nabla_{rho(e_j)} e_b.
  bool iis1 = true;
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c) {
        Poly rhs(n);
        for (std::size_t mu = 0; mu < p; ++mu)
          rhs += alg.anchor(mu, j) * data.christoffel[mu](c, b);
        const Poly& lhs = alg.structfn(j, q + b, q + c);
        if (!(lhs == rhs)) {
          iis1 = false;
          out.witnesses.push_back("iis1': e" + idx(q + c) + "-component of [e" + idx(j) + ", e" + idx(q + b) +
                                  "] is " + lhs.to_string() + " but nabla_rho(e" + idx(j) + ") gives " +
                                  rhs.to_string());
        }
      }
  out.iis1 = iis1 ? "pass" : "fail";

  PolyMatrix phi;
  bool exact = true;
  if (data.flat_frame) {
    verify_flat_frame(data);
    phi = *data.flat_frame;
  } else {
    phi = power_series_frame(data, degree_bound);
    IisData candidate = data;
    candidate.flat_frame = phi;
    try {
      verify_flat_frame(candidate);
    } catch (const InputError&) {
      exact = false;
    }
  }
  out.frame_verified = exact;
  out.degree_bound = exact ? 0 : degree_bound;

  std::vector<PolySection> lifts;
  for (std::size_t i = 0; i < m; ++i) {
    PolySection s(alg.rank, alg.zero_poly());
    for (std::size_t b = 0; b < m; ++b)
      s[q + b] = phi(b, i);
    lifts.push_back(std::move(s));
  }

  if (exact) {
    bool direct = true;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t l = 0; l < q; ++l) {
        const PolySection br = bracket_sections(alg, lifts[i], frame_section(alg, l));
        for (std::size_t c = 0; c < m; ++c)
          if (!br[q + c].is_zero()) {
            direct = false;
            out.witnesses.push_back("iis1: [parallel section " + idx(i) + ", e" + idx(l) + "] has e" + idx(q + c) +
                                    "-component " + br[q + c].to_string());
          }
      }
    out.iis1_direct = direct ? "pass" : "fail";
  }

  // Transverse derivatives of rho on parallel sections.
  Judge transverse{exact, degree_bound - 2};
  bool transverse_anchor = false;
  for (std::size_t nu = p; nu < n; ++nu)
    for (std::size_t b = q; b < alg.rank; ++b)
      transverse_anchor = transverse_anchor || !alg.anchor(nu, b).is_zero();
  for (std::size_t i = 0; i < m && transverse_anchor; ++i) {
    const VectorField x = anchor_of(alg, lifts[i]);
    for (std::size_t mu = 0; mu < p; ++mu)
      for (std::size_t nu = p; nu < n; ++nu) {
        const Poly d = x[nu].derivative(mu);
        const bool before = transverse.failed;
        transverse.look(d);
        if (transverse.failed && !before)
          out.witnesses.push_back("iis3: d" + idx(mu) + " of the d" + idx(nu) + "-component of rho(parallel section " +
                                  idx(i) + ") is " + d.to_string());
      }
  }
  out.iis3 = transverse.verdict();

  Judge brackets{exact, degree_bound - 2};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = i + 1; k < m; ++k) {
      const PolySection br = bracket_sections(alg, lifts[i], lifts[k]);
      for (std::size_t mu = 0; mu < p; ++mu)
        for (std::size_t c = 0; c < m; ++c) {
          Poly v = br[q + c].derivative(mu);
          for (std::size_t b = 0; b < m; ++b)
            v += data.christoffel[mu](c, b) * br[q + b];
          const bool before = brackets.failed;
          brackets.look(v);
          if (brackets.failed && !before)
            out.witnesses.push_back("iis2: nabla_d" + idx(mu) + " of [parallel " + idx(i) + ", parallel " + idx(k) +
                                    "] has e" + idx(q + c) + "-component " + v.to_string());
        }
    }
  if (p >= 1 && !iis1)
    brackets.failed = true;
  if (transverse.failed)
    brackets.failed = true;
  brackets.unknown = brackets.unknown || transverse.unknown;
  out.iis2 = brackets.verdict();
  return out;
}

// --- extensions and cocycles -------------------------------------------------------

ExtensionReport is_chart_extension(const IisData& data, const FullConnection& conn) {
  check_connection_shape(data, conn);
  const std::size_t q = data.q;
  const std::size_t r = data.alg.rank;
  for (std::size_t mu = 0; mu < conn.gamma.size(); ++mu)
    for (std::size_t b = 0; b < q; ++b)
      for (std::size_t c = q; c < r; ++c)
        if (!conn.gamma[mu](c, b).is_zero())
          return {false, "preserves_J", {mu, c, b}};
  for (std::size_t mu = 0; mu < data.p; ++mu) {
    const PolyMatrix block = quotient_block(conn.gamma[mu], q);
    for (std::size_t c = 0; c < data.m(); ++c)
      for (std::size_t b = 0; b < data.m(); ++b)
        if (!(block(c, b) == data.christoffel[mu](c, b)))
          return {false, "restricts_to_christoffel", {mu, q + c, q + b}};
  }
  return {};
}

FullConnection construct_extension_chart(const IisData& data,
                                         const std::optional<std::vector<PolyMatrix>>& transverse_quotient,
                                         const std::optional<std::vector<PolyMatrix>>& k_connection) {
  const std::size_t n = data.alg.nvars;
  const std::size_t r = data.alg.rank;
  const std::size_t q = data.q;
  const std::size_t m = data.m();
  if (transverse_quotient && transverse_quotient->size() != n)
    throw InputError("transverse_quotient needs one matrix per chart variable");
  if (k_connection && k_connection->size() != n)
    throw InputError("k_connection needs one matrix per chart variable");
  FullConnection conn;
  for (std::size_t mu = 0; mu < n; ++mu) {
    PolyMatrix g = poly_zero_matrix(r, r, n);
    if (k_connection) {
      require_square_poly((*k_connection)[mu], q, n, "k_connection matrix " + idx(mu));
      g.set_block(0, 0, (*k_connection)[mu]);
    }
    if (mu < data.p) {
      g.set_block(q, q, data.christoffel[mu]);
    } else if (transverse_quotient) {
      require_square_poly((*transverse_quotient)[mu], m, n, "transverse_quotient matrix " + idx(mu));
      g.set_block(q, q, (*transverse_quotient)[mu]);
    }
    conn.gamma.push_back(std::move(g));
  }
  return conn;
}

IisForm extension_difference_form(const IisData& data, const FullConnection& conn1, const FullConnection& conn2) {
  check_connection_shape(data, conn1);
  check_connection_shape(data, conn2);
  const std::size_t n = data.alg.nvars;
  const std::size_t q = data.q;
  const std::size_t r = data.alg.rank;
  IisForm out = IisForm::zero(0, data.p, n, data.m());
  for (std::size_t mu = 0; mu < n; ++mu) {
    const PolyMatrix diff = conn1.gamma[mu] - conn2.gamma[mu];
    for (std::size_t b = 0; b < q; ++b)
      for (std::size_t c = q; c < r; ++c)
        if (!diff(c, b).is_zero())
          throw InternalError("extension difference does not preserve J");
    const PolyMatrix block = quotient_block(diff, q);
    if (mu < data.p) {
      if (!block.is_zero())
        throw InternalError("extension difference is nonzero along F_M");
    } else {
      out.slots[0][mu - data.p] = block;
    }
  }
  return out;
}

IisForm atiyah_cocycle_iis(const IisData& data, const FullConnection& conn) {
  const ExtensionReport ext = is_chart_extension(data, conn);
  if (!ext.holds)
    throw PreconditionError("connection is not an extension (" + ext.failed_condition + ")");
  const std::size_t n = data.alg.nvars;
  IisForm out = IisForm::zero(1, data.p, n, data.m());
  std::vector<PolyMatrix> quot;
  for (const auto& g : conn.gamma)
    quot.push_back(quotient_block(g, data.q));
  for (std::size_t mu = 0; mu < data.p; ++mu)
    for (std::size_t nu = data.p; nu < n; ++nu)
      out.slots[mu][nu - data.p] =
          derivative(quot[nu], mu) - derivative(quot[mu], nu) + commutator(quot[mu], quot[nu]);
  return out;
}

namespace {

// nabla^Hom along d_mu of a Hom(TM/F_M, End(A/J))-value.
PolyMatrix hom_iis(const IisData& data, std::size_t mu, const PolyMatrix& phi) {
  const PolyMatrix& g = data.christoffel[mu];
  return derivative(phi, mu) + g * phi - phi * g;
}

void check_iis_form(const IisData& data, const IisForm& form) {
  if (form.p != data.p || form.nvars != data.alg.nvars || form.m != data.m())
    throw InputError("form shape does not match the iis data");
}

}  // namespace

IisForm d_iis(const IisData& data, const IisForm& form) {
  check_iis_form(data, form);
  if (form.degree < 0 || form.degree > 1)
    throw InputError("d_iis: unsupported degree " + std::to_string(form.degree));
  const std::size_t p = data.p;
  const std::size_t t = form.transverse();
  if (form.degree == 0) {
    IisForm out = IisForm::zero(1, p, form.nvars, form.m);
    for (std::size_t mu = 0; mu < p; ++mu)
      for (std::size_t nu = 0; nu < t; ++nu)
        out.slots[mu][nu] = hom_iis(data, mu, form.slots[0][nu]);
    return out;
  }
  IisForm out = IisForm::zero(2, p, form.nvars, form.m);
  for (std::size_t mu1 = 0; mu1 < p; ++mu1)
    for (std::size_t mu2 = 0; mu2 < p; ++mu2)
      for (std::size_t nu = 0; nu < t; ++nu)
        out.slots[mu1 * p + mu2][nu] =
            hom_iis(data, mu1, form.slots[mu2][nu]) - hom_iis(data, mu2, form.slots[mu1][nu]);
  return out;
}

int default_primitive_degree(const IisForm& omega) { return std::max(4, 1 + omega.max_degree()); }

PrimitiveResult primitive_search(const IisData& data, const IisForm& omega) {
  return primitive_search(data, omega, default_primitive_degree(omega));
}

PrimitiveResult primitive_search(const IisData& data, const IisForm& omega, int degree_bound) {
  check_iis_form(data, omega);
  if (omega.degree != 1)
    throw InputError("primitive_search expects a 1-form");
  if (!d_iis(data, omega).is_zero())
    throw InputError("primitive_search: the form is not closed");
  const std::size_t n = data.alg.nvars;
  const std::size_t p = data.p;
  const std::size_t m = data.m();
  PrimitiveResult result;
  result.degree_bound = degree_bound;
  result.primitive = IisForm::zero(0, p, n, m);

  // All monomials of total degree <= degree_bound, in graded-lex order.
  std::vector<Poly::Exponents> monomials;
  if (degree_bound >= 0) {
    Poly::Exponents e(n, 0);
    std::vector<Poly::Exponents> all;
    auto rec = [&](auto&& self, std::size_t var, int left) -> void {
      if (var == n) {
        all.push_back(e);
        return;
      }
      for (int d = 0; d <= left; ++d) {
        e[var] = static_cast<unsigned>(d);
        self(self, var + 1, left - d);
      }
      e[var] = 0;
    };
    rec(rec, 0, degree_bound);
    std::sort(all.begin(), all.end(), Poly::GradedLex());
    monomials = std::move(all);
  }

  using RowKey = std::tuple<std::size_t, std::size_t, std::size_t, Poly::Exponents>;  // mu, c, b, monomial
  for (std::size_t nu = 0; nu + p < n; ++nu) {
    // Columns: (c, b, monomial); each column's image is hom_iis applied to that unit entry.
    std::map<RowKey, std::size_t> rows;
    std::vector<std::vector<std::pair<std::size_t, Rational>>> columns;
    auto row_of = [&](const RowKey& key) {
      auto [it, inserted] = rows.try_emplace(key, rows.size());
      return it->second;
    };
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t b = 0; b < m; ++b)
        for (const auto& mono : monomials) {
          PolyMatrix unit = poly_zero_matrix(m, m, n);
          unit(c, b) = Poly::monomial(mono, Rational(1));
          std::vector<std::pair<std::size_t, Rational>> col;
          for (std::size_t mu = 0; mu < p; ++mu) {
            const PolyMatrix img = hom_iis(data, mu, unit);
            for (std::size_t i = 0; i < m; ++i)
              for (std::size_t j = 0; j < m; ++j)
                for (const auto& [exps, coeff] : img(i, j).terms())
                  col.emplace_back(row_of({mu, i, j, exps}), coeff);
          }
          columns.push_back(std::move(col));
        }
    std::vector<std::pair<std::size_t, Rational>> rhs_entries;
    for (std::size_t mu = 0; mu < p; ++mu)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
          for (const auto& [exps, coeff] : omega.slots[mu][nu](i, j).terms())
            rhs_entries.emplace_back(row_of({mu, i, j, exps}), coeff);

    QMatrix a(rows.size(), columns.size(), Rational(0));
    for (std::size_t col = 0; col < columns.size(); ++col)
      for (const auto& [row, v] : columns[col])
        a(row, col) += v;
    QVector rhs(rows.size(), Rational(0));
    for (const auto& [row, v] : rhs_entries)
      rhs[row] += v;

    const SolveResult solved = linear_solve(a, rhs);
    if (!solved.solvable)
      return result;
    PolyMatrix phi = poly_zero_matrix(m, m, n);
    std::size_t col = 0;
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t b = 0; b < m; ++b)
        for (const auto& mono : monomials)
          phi(c, b).add_term(mono, solved.solution[col++]);
    result.primitive.slots[0][nu] = std::move(phi);
  }
  if (!(d_iis(data, result.primitive) == omega))
    throw InternalError("primitive_search: solution does not reproduce the cocycle");
  result.found = true;
  return result;
}

// --- Lie pair side ---------------------------------------------------------------

std::vector<PolyMatrix> basic_connection(const Algebroid& alg, const FullConnection& conn) {
  const std::size_t r = alg.rank;
  const std::size_t n = alg.nvars;
  if (conn.gamma.size() != n)
    throw InputError("basic_connection: connection needs one matrix per chart variable");
  for (std::size_t mu = 0; mu < n; ++mu)
    require_square_poly(conn.gamma[mu], r, n, "connection matrix " + idx(mu));
  std::vector<PolyMatrix> out;
  for (std::size_t i = 0; i < r; ++i) {
    PolyMatrix b = poly_zero_matrix(r, r, n);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < r; ++k) {
        Poly v = alg.structfn(i, j, k);
        for (std::size_t mu = 0; mu < n; ++mu)
          if (!alg.anchor(mu, j).is_zero())
            v += alg.anchor(mu, j) * conn.gamma[mu](k, i);
        b(k, j) = std::move(v);
      }
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<PolyMatrix> bott_chart(const Algebroid& alg, std::size_t q) {
  const std::size_t m = alg.rank - q;
  std::vector<PolyMatrix> out;
  for (std::size_t j = 0; j < q; ++j) {
    PolyMatrix c = poly_zero_matrix(m, m, alg.nvars);
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t k = 0; k < m; ++k)
        c(k, b) = alg.structfn(j, q + b, q + k);
    out.push_back(std::move(c));
  }
  return out;
}

PairForm pair_cocycle(const Algebroid& alg, std::size_t q, const FullConnection& conn) {
  const std::size_t r = alg.rank;
  const std::size_t m = r - q;
  const std::vector<PolyMatrix> bas = basic_connection(alg, conn);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < q; ++j)
      for (std::size_t k = q; k < r; ++k)
        if (!bas[i](k, j).is_zero())
          throw PreconditionError("basic connection along e" + idx(i) + " sends e" + idx(j) + " out of J");
  PairForm out = PairForm::zero(1, q, m, alg.nvars);
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t a = 0; a < m; ++a) {
      const std::size_t x = q + a;
      PolyMatrix curv = commutator(bas[j], bas[x]) + apply_field(anchor_column(alg, j), bas[x]) -
                        apply_field(anchor_column(alg, x), bas[j]);
      for (std::size_t l = 0; l < r; ++l) {
        const Poly& f = alg.structfn(j, x, l);
        if (f.is_zero())
          continue;
        for (std::size_t u = 0; u < r; ++u)
          for (std::size_t v = 0; v < r; ++v)
            if (!bas[l](u, v).is_zero())
              curv(u, v) -= f * bas[l](u, v);
      }
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t c = 0; c < m; ++c)
          out.slots[j](a, b, c) = curv(q + c, q + b);
    }
  return out;
}

PairForm rho_star(const Algebroid& alg, const IisData& data, const IisForm& form) {
  check_iis_form(data, form);
  const std::size_t p = data.p;
  const std::size_t q = data.q;
  const std::size_t m = data.m();
  const std::size_t n = alg.nvars;
  for (std::size_t nu = p; nu < n; ++nu)
    for (std::size_t j = 0; j < q; ++j)
      if (!alg.anchor(nu, j).is_zero())
        throw InputError("rho_star: rho(J) is not contained in F_M");
  if (form.degree < 0 || form.degree > 2)
    throw InputError("rho_star: unsupported degree " + std::to_string(form.degree));

  // Value of the form on one F_M slot contracted with the transverse class of rho(e_{q+a2}).
  auto contract = [&](const std::vector<PolyMatrix>& slot, std::size_t a1, std::size_t a2, std::size_t c) {
    Poly v(n);
    for (std::size_t nu = p; nu < n; ++nu)
      if (!alg.anchor(nu, q + a2).is_zero())
        v += alg.anchor(nu, q + a2) * slot[nu - p](c, a1);
    return v;
  };

  PairForm out = PairForm::zero(form.degree, q, m, n);
  const std::size_t k = static_cast<std::size_t>(form.degree);
  for (std::size_t s = 0; s < out.slots.size(); ++s) {
    const std::size_t j1 = k == 2 ? s / q : s;
    const std::size_t j2 = k == 2 ? s % q : 0;
    for (std::size_t fs = 0; fs < form.slots.size(); ++fs) {
      Poly weight = Poly::constant(n, Rational(1));
      if (k == 1)
        weight = alg.anchor(fs, j1);
      if (k == 2)
        weight = alg.anchor(fs / p, j1) * alg.anchor(fs % p, j2);
      if (weight.is_zero())
        continue;
      for (std::size_t a1 = 0; a1 < m; ++a1)
        for (std::size_t a2 = 0; a2 < m; ++a2)
          for (std::size_t c = 0; c < m; ++c) {
            const Poly v = contract(form.slots[fs], a1, a2, c);
            if (!v.is_zero())
              out.slots[s](a1, a2, c) += weight * v;
          }
    }
  }
  return out;
}

namespace {

Tensor3<Poly> hom_pair(const Algebroid& alg, const PolyMatrix& cj, std::size_t j, const Tensor3<Poly>& phi,
                       std::size_t m) {
  const VectorField rho_j = anchor_column(alg, j);
  Tensor3<Poly> out(m, m, m, alg.zero_poly());
  for (std::size_t a1 = 0; a1 < m; ++a1)
    for (std::size_t a2 = 0; a2 < m; ++a2)
      for (std::size_t c = 0; c < m; ++c) {
        Poly v = apply_vector_field(rho_j, phi(a1, a2, c));
        for (std::size_t k = 0; k < m; ++k) {
          if (!cj(c, k).is_zero())
            v += cj(c, k) * phi(a1, a2, k);
          if (!cj(k, a1).is_zero())
            v -= cj(k, a1) * phi(k, a2, c);
          if (!cj(k, a2).is_zero())
            v -= cj(k, a2) * phi(a1, k, c);
        }
        out(a1, a2, c) = std::move(v);
      }
  return out;
}

}  // namespace

PairForm d_pair(const Algebroid& alg, std::size_t q, const PairForm& form) {
  const std::size_t m = alg.rank - q;
  if (form.q != q || form.m != m || form.nvars != alg.nvars)
    throw InputError("form shape does not match the Lie pair");
  if (form.degree < 0 || form.degree > 1)
    throw InputError("d_pair: unsupported degree " + std::to_string(form.degree));
  const std::vector<PolyMatrix> bott = bott_chart(alg, q);
  if (form.degree == 0) {
    PairForm out = PairForm::zero(1, q, m, alg.nvars);
    for (std::size_t j = 0; j < q; ++j)
      out.slots[j] = hom_pair(alg, bott[j], j, form.slots[0], m);
    return out;
  }
  PairForm out = PairForm::zero(2, q, m, alg.nvars);
  for (std::size_t j1 = 0; j1 < q; ++j1)
    for (std::size_t j2 = 0; j2 < q; ++j2) {
      Tensor3<Poly> v = hom_pair(alg, bott[j1], j1, form.slots[j2], m);
      const Tensor3<Poly> w = hom_pair(alg, bott[j2], j2, form.slots[j1], m);
      for (std::size_t i = 0; i < v.size(); ++i)
        v.flat(i) -= w.flat(i);
      for (std::size_t k = 0; k < q; ++k) {
        const Poly& f = alg.structfn(j1, j2, k);
        if (f.is_zero())
          continue;
        for (std::size_t i = 0; i < v.size(); ++i)
          v.flat(i) -= f * form.slots[k].flat(i);
      }
      out.slots[j1 * q + j2] = std::move(v);
    }
  return out;
}

// --- fibrations --------------------------------------------------------------------

FibrationResult make_coordinate_fibration(const Algebroid& alg, std::size_t p, std::size_t q,
                                          const std::optional<std::vector<PolyMatrix>>& quotient_connection) {
  const std::size_t n = alg.nvars;
  const std::size_t r = alg.rank;
  if (p > n || q > r)
    throw InputError("make_coordinate_fibration: p must be <= nvars and q <= rank");
  const std::size_t m = r - q;
  FibrationResult out;
  auto fail = [&](std::string condition, std::vector<std::size_t> indices, const Poly& witness) {
    out.fibered = false;
    out.witness_condition = std::move(condition);
    out.witness_indices = std::move(indices);
    out.witness_polynomial = witness.to_string();
    return out;
  };

  for (std::size_t nu = p; nu < n; ++nu)
    for (std::size_t j = 0; j < q; ++j)
      if (!alg.anchor(nu, j).is_zero())
        return fail("kernel_anchor", {nu, j}, alg.anchor(nu, j));
  for (std::size_t nu = p; nu < n; ++nu)
    for (std::size_t b = q; b < r; ++b)
      for (std::size_t mu = 0; mu < p; ++mu)
        if (alg.anchor(nu, b).depends_on(mu))
          return fail("projectable_anchor", {nu, b, mu}, alg.anchor(nu, b));
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t c = q; c < r; ++c)
        if (!alg.structfn(i, j, c).is_zero())
          return fail("ideal", {i, j, c}, alg.structfn(i, j, c));
  for (std::size_t a = q; a < r; ++a)
    for (std::size_t b = q; b < r; ++b)
      for (std::size_t c = q; c < r; ++c)
        for (std::size_t mu = 0; mu < p; ++mu)
          if (alg.structfn(a, b, c).depends_on(mu))
            return fail("projectable_bracket", {a, b, c, mu}, alg.structfn(a, b, c));

  const std::size_t base = n - p;
  if (quotient_connection) {
    if (quotient_connection->size() != base)
      throw InputError("quotient connection needs one matrix per base variable");
    for (std::size_t nu = 0; nu < base; ++nu)
      require_square_poly((*quotient_connection)[nu], m, base, "quotient connection matrix " + idx(nu));
  }

  out.fibered = true;
  out.quotient = Algebroid::zero(base, m);
  for (std::size_t nu = 0; nu < base; ++nu)
    for (std::size_t b = 0; b < m; ++b)
      out.quotient.anchor(nu, b) = alg.anchor(p + nu, q + b).drop_leading_variables(p);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c)
        out.quotient.structfn(a, b, c) = alg.structfn(q + a, q + b, q + c).drop_leading_variables(p);

  out.nabla_phi.alg = alg;
  out.nabla_phi.p = p;
  out.nabla_phi.q = q;
  out.nabla_phi.christoffel.assign(p, poly_zero_matrix(m, m, n));
  out.nabla_phi.flat_frame = poly_identity(m, n);

  for (std::size_t mu = 0; mu < n; ++mu) {
    PolyMatrix g = poly_zero_matrix(r, r, n);
    if (mu >= p && quotient_connection) {
      const PolyMatrix& small = (*quotient_connection)[mu - p];
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t b = 0; b < m; ++b)
          g(q + c, q + b) = small(c, b).embedded(n, p);
    }
    out.projectable_conn.gamma.push_back(std::move(g));
  }
  return out;
}

}  // namespace alab::chart
