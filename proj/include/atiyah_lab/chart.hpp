#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "atiyah_lab/matrix.hpp"
#include "atiyah_lab/poly.hpp"
#include "atiyah_lab/tensor.hpp"
#include "atiyah_lab/validation.hpp"

// Lie algebroids trivialized over a polynomial chart x1..xn. Indices are
// 0-based: J = span{e_0..e_{q-1}}, F_M = span{d_0..d_{p-1}}, and quotient
// indices a, b, c run over 0..r-q-1 standing for e_{q+a} etc.
namespace alab::chart {

/// Coefficients of a section in the frame e_0..e_{r-1}.
using PolySection = std::vector<Poly>;
/// Coefficients of a vector field in the frame d_0..d_{n-1}.
using VectorField = std::vector<Poly>;

struct Algebroid {
  std::size_t nvars = 0;
  std::size_t rank = 0;
  PolyMatrix anchor;       ///< n x r; column i is rho(e_i)
  Tensor3<Poly> structfn;  ///< [e_i, e_j] = sum_k structfn(i, j, k) e_k

  static Algebroid zero(std::size_t nvars, std::size_t rank);
  Poly zero_poly() const { return Poly(nvars); }
  /// Sets [e_i, e_j] = f e_k and [e_j, e_i] = -f e_k.
  void set_bracket(std::size_t i, std::size_t j, std::size_t k, const Poly& f);
};

/// Candidate infinitesimal ideal system. christoffel[mu] (mu < p) is the
/// m x m matrix with nabla_{d_mu} e_b = sum_c christoffel[mu](c, b) e_c on A/J.
struct IisData {
  Algebroid alg;
  std::size_t p = 0;
  std::size_t q = 0;
  std::vector<PolyMatrix> christoffel;
  std::optional<PolyMatrix> flat_frame;

  std::size_t m() const { return alg.rank - q; }
};

/// nabla_{d_mu} e_b = sum_c gamma[mu](c, b) e_c, one r x r matrix per coordinate.
struct FullConnection {
  std::vector<PolyMatrix> gamma;
};

/// Form on F_M of degree k valued in Hom(TM/F_M, End(A/J)). Slot s indexes
/// the F_M arguments (0 for k = 0, mu for k = 1, mu1 * p + mu2 for k = 2);
/// slots[s][nu - p] is the m x m matrix of form(...)(class of d_nu).
struct IisForm {
  int degree = 0;
  std::size_t p = 0;
  std::size_t nvars = 0;
  std::size_t m = 0;
  std::vector<std::vector<PolyMatrix>> slots;

  static IisForm zero(int degree, std::size_t p, std::size_t nvars, std::size_t m);
  std::size_t transverse() const { return nvars - p; }
  bool is_zero() const;
  int max_degree() const;
  friend bool operator==(const IisForm& a, const IisForm& b) {
    return a.degree == b.degree && a.p == b.p && a.nvars == b.nvars && a.m == b.m && a.slots == b.slots;
  }
  IisForm& operator-=(const IisForm& other);
};

/// Form on J of degree k valued in bilinear maps (A/J) x (A/J) -> A/J.
/// slots[s](a1, a2, c) is the e_c-coefficient of form(...)(a1)(a2); slot
/// indexing as in IisForm with q in place of p.
struct PairForm {
  int degree = 0;
  std::size_t q = 0;
  std::size_t m = 0;
  std::size_t nvars = 0;
  std::vector<Tensor3<Poly>> slots;

  static PairForm zero(int degree, std::size_t q, std::size_t m, std::size_t nvars);
  bool is_zero() const;
  friend bool operator==(const PairForm& a, const PairForm& b) {
    return a.degree == b.degree && a.q == b.q && a.m == b.m && a.nvars == b.nvars && a.slots == b.slots;
  }
};

// --- algebroid structure ---------------------------------------------------

/// X(f) for a vector field X.
Poly apply_vector_field(const VectorField& x, const Poly& f);
VectorField vector_field_bracket(const VectorField& x, const VectorField& y);
/// rho(s) as a vector field.
VectorField anchor_of(const Algebroid& alg, const PolySection& s);
PolySection frame_section(const Algebroid& alg, std::size_t i);

ValidationReport validate_chart_algebroid(const Algebroid& alg);
/// Leibniz extension of the frame bracket.
PolySection bracket_sections(const Algebroid& alg, const PolySection& a, const PolySection& b);

/// Shape checks, rho(J) in F_M, closure of J and flatness of christoffel.
ValidationReport validate_iis_data(const IisData& data);

// --- infinitesimal ideal systems ---------------------------------------------

struct IisCheck {
  std::string iis1;         ///< "pass" | "fail" (decided through iis1')
  std::string iis1_direct;  ///< "pass" | "fail" with a verified frame, else empty
  std::string iis2;         ///< "pass" | "fail" | "truncated"
  std::string iis3;
  bool frame_verified = false;
  int degree_bound = 0;           ///< power-series truncation, 0 when frame verified
  bool rho_j_spans_fm = false;    ///< certified rho(J) = F_M
  std::vector<std::string> witnesses;
};

/// Default truncation degree for power-series flat frames.
inline constexpr int kDefaultFrameDegree = 6;

/// Throws PreconditionError when the data invariants fail and InputError when
/// a supplied flat frame is not flat or not unimodular.
IisCheck check_iis(const IisData& data, int degree_bound = kDefaultFrameDegree);

/// Throws InputError unless data.flat_frame is flat with nonzero constant determinant.
void verify_flat_frame(const IisData& data);
/// Formal flat frame normalized to the identity on x_0 = .. = x_{p-1} = 0,
/// exact through total degree `degree_bound`.
PolyMatrix power_series_frame(const IisData& data, int degree_bound);
/// True when some p x p minor of rho restricted to J is a nonzero constant.
bool rho_j_spans_fm(const IisData& data);

/// failed_condition is "preserves_J" or "restricts_to_christoffel".
ExtensionReport is_chart_extension(const IisData& data, const FullConnection& conn);
/// Block assembly; both optionals are indexed by coordinate mu (entries for
/// mu < p of transverse_quotient are ignored).
FullConnection construct_extension_chart(const IisData& data,
                                         const std::optional<std::vector<PolyMatrix>>& transverse_quotient = {},
                                         const std::optional<std::vector<PolyMatrix>>& k_connection = {});

IisForm extension_difference_form(const IisData& data, const FullConnection& conn1, const FullConnection& conn2);
IisForm atiyah_cocycle_iis(const IisData& data, const FullConnection& conn);
IisForm d_iis(const IisData& data, const IisForm& form);

struct PrimitiveResult {
  bool found = false;
  int degree_bound = 0;
  IisForm primitive;
};

/// Default bound max(4, 1 + max degree of omega).
int default_primitive_degree(const IisForm& omega);
/// Searches a 0-form primitive with entries of total degree <= degree_bound.
/// Not finding one is not a proof of nonvanishing.
PrimitiveResult primitive_search(const IisData& data, const IisForm& omega, int degree_bound);
PrimitiveResult primitive_search(const IisData& data, const IisForm& omega);

// --- Lie pair side -----------------------------------------------------------

/// B_i with nabla^bas_{e_i} e_j = sum_k B_i(k, j) e_k.
std::vector<PolyMatrix> basic_connection(const Algebroid& alg, const FullConnection& conn);
/// Quotient action of e_j, j < q: C_j(c, b) = structfn(j, q+b, q+c).
std::vector<PolyMatrix> bott_chart(const Algebroid& alg, std::size_t q);
/// Throws PreconditionError when the basic connection does not preserve J.
PairForm pair_cocycle(const Algebroid& alg, std::size_t q, const FullConnection& conn);
/// Throws InputError when rho(J) is not contained in F_M.
PairForm rho_star(const Algebroid& alg, const IisData& data, const IisForm& form);
/// Differential on J-forms of degree 0 and 1 for the Bott representation.
PairForm d_pair(const Algebroid& alg, std::size_t q, const PairForm& form);

// --- fibrations --------------------------------------------------------------

struct FibrationResult {
  bool fibered = false;
  std::string witness_condition;  ///< "kernel_anchor", "projectable_anchor", "ideal", "projectable_bracket"
  std::vector<std::size_t> witness_indices;
  std::string witness_polynomial;
  Algebroid quotient;
  IisData nabla_phi;
  FullConnection projectable_conn;
};

/// Recognizes the coordinate fibration (x0..x_{n-1}) -> (x_p..x_{n-1}) with
/// kernel span{e_0..e_{q-1}}. `quotient_connection` optionally supplies a
/// connection on the quotient bundle over the base (n-p matrices in base
/// variables) that is pulled back for the transverse directions.
FibrationResult make_coordinate_fibration(const Algebroid& alg, std::size_t p, std::size_t q,
                                          const std::optional<std::vector<PolyMatrix>>& quotient_connection = {});

}  // namespace alab::chart
