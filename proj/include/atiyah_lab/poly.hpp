#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "atiyah_lab/rational.hpp"

namespace alab {

/// Sparse multivariate polynomial with exact rational coefficients over a
/// fixed number of chart variables x1..xN.
///
/// Terms are kept in graded-lexicographic order (x1 > x2 > ... > xN) with no
/// stored zero coefficients, so structural equality is mathematical equality.
/// Variable indices in the API are 0-based; the text syntax is 1-based.
class Poly {
public:
  using Exponents = std::vector<unsigned>;

  struct GradedLex {
    bool operator()(const Exponents& a, const Exponents& b) const;
  };
  using Terms = std::map<Exponents, Rational, GradedLex>;

  explicit Poly(std::size_t nvars = 0) : nvars_(nvars) {}

  static Poly constant(std::size_t nvars, const Rational& c);
  static Poly variable(std::size_t nvars, std::size_t var);
  static Poly monomial(const Exponents& exps, const Rational& c);

  /// Parses e.g. "3/2*x1^2*x2 - x3". Operators + - * ^ and parentheses; no
  /// implicit multiplication. Throws SyntaxError with the failing offset.
  static Poly parse(std::string_view text, std::size_t nvars);

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  Rational coefficient(const Exponents& exps) const;
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  bool depends_on(std::size_t var) const;

  void add_term(const Exponents& exps, const Rational& c);

  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(const Poly& other);
  Poly& operator*=(const Rational& c);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  Poly operator-() const;

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  /// Formal partial derivative in `var`.
  Poly derivative(std::size_t var) const;
  /// The antiderivative in `var` that vanishes on x_var = 0.
  Poly antiderivative(std::size_t var) const;
  /// Substitutes x_var = 0.
  Poly at_zero(std::size_t var) const;
  /// Drops every term of total degree above `max_degree`.
  Poly truncated(int max_degree) const;
  /// Removes the first `count` variables; they must not occur.
  Poly drop_leading_variables(std::size_t count) const;
  /// Re-embeds into `nvars` variables with x_i mapped to x_{i+offset}.
  Poly embedded(std::size_t nvars, std::size_t offset) const;

  /// Canonical text, leading (graded-lex largest) term first; "0" for zero.
  std::string to_string() const;

private:
  void check_compatible(const Poly& other) const;

  std::size_t nvars_;
  Terms terms_;
};

/// Raises on nvars mismatch (InputError).
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
/// Raises InputError when `var` is out of range.
Poly poly_diff(const Poly& p, std::size_t var);

}  // namespace alab
