#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "atiyah_lab/linsolve.hpp"
#include "atiyah_lab/matrix.hpp"
#include "atiyah_lab/rational.hpp"
#include "atiyah_lab/tensor.hpp"
#include "atiyah_lab/validation.hpp"

// Lie pairs over a point. Indices are 0-based throughout; J is spanned by
// the first q basis vectors and the quotient g/J by the classes of the rest.
namespace alab::point {

/// [e_i, e_j] = sum_k c(i, j, k) e_k.
struct LieAlgebra {
  std::size_t dim = 0;
  Tensor3<Rational> c;

  static LieAlgebra zero(std::size_t dim) { return {dim, Tensor3<Rational>(dim, dim, dim, Rational(0))}; }
  /// Sets [e_i, e_j] = value * e_k and [e_j, e_i] = -value * e_k.
  void set_bracket(std::size_t i, std::size_t j, std::size_t k, const Rational& value);
};

struct LiePair {
  LieAlgebra g;
  std::size_t q = 0;

  std::size_t quotient_dim() const { return g.dim - q; }
};

/// nabla_{e_a} e_b = sum_k gamma(a, b, k) e_k.
struct PointConnection {
  Tensor3<Rational> gamma;
};

/// A k-form on J (k <= 2) valued in bilinear maps (g/J) x (g/J) -> g/J.
/// slots[s](a1, a2, c) is the e_c-coefficient of form(j...)(a1)(a2), where
/// s = 0 for k = 0, s = j for k = 1 and s = j1 * q + j2 for k = 2.
struct CEForm {
  int degree = 0;
  std::size_t q = 0;
  std::size_t m = 0;
  std::vector<Tensor3<Rational>> slots;

  static CEForm zero(int degree, std::size_t q, std::size_t m);
  bool is_zero() const;
  friend bool operator==(const CEForm& a, const CEForm& b) {
    return a.degree == b.degree && a.q == b.q && a.m == b.m && a.slots == b.slots;
  }
  CEForm& operator-=(const CEForm& other);
};

ValidationReport validate_lie_algebra(const LieAlgebra& g);
/// Reports c(i, j, k) != 0 with i, j < q <= k.
ValidationReport check_subalgebra(const LiePair& pair);
/// Throws PreconditionError unless the algebra validates and J is closed.
void require_valid_pair(const LiePair& pair);

/// (B_j)_{k b} = c(j, q+b, q+k): the action of e_j on the quotient.
std::vector<QMatrix> bott_rep(const LiePair& pair);

PointConnection construct_default_extension(const LiePair& pair);

/// failed_condition is "preserves_J" or "induces_bott".
ExtensionReport is_point_extension(const LiePair& pair, const PointConnection& conn);

CEForm atiyah_cocycle_point(const LiePair& pair, const PointConnection& conn);

/// Chevalley-Eilenberg differential of the Bott-induced representation on
/// Hom(g/J, End(g/J)). Accepts degrees 0 and 1.
CEForm ce_differential(const LiePair& pair, const CEForm& form);

/// The 0-form given by the quotient block of conn1 - conn2.
CEForm extension_difference(const LiePair& pair, const PointConnection& conn1, const PointConnection& conn2);

struct PairDecision {
  bool vanishes = false;
  CEForm cocycle;
  CEForm primitive;      ///< set when vanishes
  QVector certificate;   ///< set otherwise
  QMatrix system;        ///< the assembled d on 0-forms
  QVector rhs;           ///< the flattened cocycle
};

/// Decides whether the Atiyah class of the pair vanishes, using `conn` as
/// the extension. Unknowns are 0-form entries flattened as (a1*m + a2)*m + c,
/// equations are (j, a1, a2, c) in the same order.
PairDecision atiyah_class_decide(const LiePair& pair, const PointConnection& conn);
PairDecision atiyah_class_decide(const LiePair& pair);

bool naive_ideal_check(const LiePair& pair);

/// Flattening used by atiyah_class_decide.
QVector flatten(const CEForm& form);
CEForm unflatten(const QVector& values, int degree, std::size_t q, std::size_t m);

}  // namespace alab::point
