#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "atiyah_lab/errors.hpp"
#include "atiyah_lab/linsolve.hpp"
#include "atiyah_lab/poly.hpp"
#include "atiyah_lab/rational.hpp"
#include "atiyah_lab/sampling.hpp"
#include "oracles.hpp"

using namespace alab;

namespace {

Poly P(const char* text, std::size_t n = 3) { return Poly::parse(text, n); }

QMatrix qmat(std::initializer_list<std::initializer_list<int>> rows) {
  QMatrix m(rows.size(), rows.begin()->size(), Rational(0));
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (int v : row)
      m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("rational parsing is canonical") {
  CHECK(to_string(parse_rational("4/6")) == "2/3");
  CHECK(to_string(parse_rational("-0/5")) == "0");
  CHECK(to_string(parse_rational("-3/9")) == "-1/3");
  CHECK_THROWS_AS(parse_rational("3/-9"), SyntaxError);
  CHECK(to_string(parse_rational("7")) == "7");
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("1/"), SyntaxError);
}

TEST_CASE("rational field laws on seeded triples") {
  sampling::Rng rng(sampling::seed_from_env());
  for (int t = 0; t < 200; ++t) {
    const Rational a = sampling::random_rational(rng), b = sampling::random_rational(rng),
                   c = sampling::random_rational(rng);
    CHECK(Rational((a + b) + c) == Rational(a + (b + c)));
    CHECK(Rational(a * b) == Rational(b * a));
    CHECK(Rational(a * (b + c)) == Rational(a * b + a * c));
  }
}

TEST_CASE("polynomial arithmetic") {
  CHECK(poly_mul(P("x1 + 1"), P("x1 - 1")) == P("x1^2 - 1"));
  const Poly p = P("3/2*x1^2*x2 - x3");
  CHECK(poly_add(p, Poly(3)) == p);
  CHECK(poly_sub(P("x1*x2"), P("x1*x2")).is_zero());
  CHECK(poly_sub(P("x1*x2"), P("x1*x2")).terms().empty());
  CHECK_THROWS_AS(poly_add(P("x1", 1), P("x1", 2)), InputError);
}

TEST_CASE("polynomial derivatives") {
  CHECK(poly_diff(P("x1^2*x2"), 0) == P("2*x1*x2"));
  CHECK(poly_diff(P("x1"), 1).is_zero());
  CHECK(poly_diff(P("3/2*x1 + x2^3"), 0) == P("3/2"));
  CHECK_THROWS_AS(poly_diff(P("x1"), 3), InputError);

  sampling::Rng rng(sampling::seed_from_env());
  for (int t = 0; t < 50; ++t) {
    const Poly q = sampling::random_poly(rng, 3, 4, 5);
    for (std::size_t mu = 0; mu < 3; ++mu)
      for (std::size_t nu = 0; nu < 3; ++nu)
        CHECK(poly_diff(poly_diff(q, mu), nu) == poly_diff(poly_diff(q, nu), mu));
  }
}

TEST_CASE("polynomial text round trip in graded-lex order") {
  const Poly p = P("x2 - x1^2 + 3/2*x1*x2 + 1");
  CHECK(p.to_string() == "-x1^2 + 3/2*x1*x2 + x2 + 1");
  CHECK(P(p.to_string().c_str()) == p);
  CHECK(Poly(2).to_string() == "0");
  CHECK(P("(x1 + x2)^2", 2) == P("x1^2 + 2*x1*x2 + x2^2", 2));
}

TEST_CASE("polynomial syntax errors carry positions") {
  try {
    P("x1^", 1);
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 3);
  }
  CHECK_THROWS_AS(P("x4", 3), SyntaxError);
  CHECK_THROWS_AS(P("2 x1", 1), SyntaxError);
  CHECK_THROWS_AS(P("x1 +", 1), SyntaxError);
}

TEST_CASE("linear_solve on small systems") {
  const SolveResult id = linear_solve(qmat({{1, 0}, {0, 1}}), {Rational(3), Rational(-2)});
  REQUIRE(id.solvable);
  CHECK(id.solution == QVector{Rational(3), Rational(-2)});

  const QMatrix a = qmat({{1, 1}, {2, 2}});
  const QVector b{Rational(1), Rational(3)};
  const SolveResult bad = linear_solve(a, b);
  REQUIRE_FALSE(bad.solvable);
  CHECK(vec_mat(bad.certificate, a) == QVector{Rational(0), Rational(0)});
  CHECK(dot(bad.certificate, b) != 0);
  // The left kernel is one-dimensional, so the certificate is a multiple of (-2, 1).
  CHECK(bad.certificate[0] == -2 * bad.certificate[1]);

  CHECK_THROWS_AS(linear_solve(a, {Rational(1)}), InputError);
}

TEST_CASE("linear_solve on seeded consistent and inconsistent systems") {
  sampling::Rng rng(sampling::seed_from_env());
  for (int t = 0; t < 40; ++t) {
    QMatrix a(6, 4, Rational(0));
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        a(i, j) = sampling::random_rational(rng);
    QVector x0(4);
    for (auto& v : x0)
      v = sampling::random_rational(rng);
    const QVector b = mat_vec(a, x0);
    const SolveResult r = linear_solve(a, b);
    REQUIRE(r.solvable);
    CHECK(mat_vec(a, r.solution) == b);

    QVector b2 = b;
    b2[t % 6] += 1;
    const SolveResult r2 = linear_solve(a, b2);
    const std::size_t rk = oracle::dense_rank(oracle::dense(a));
    const std::size_t rk2 = oracle::dense_rank(oracle::with_column(oracle::dense(a), b2));
    CHECK(r2.solvable == (rk == rk2));
    if (r2.solvable) {
      CHECK(mat_vec(a, r2.solution) == b2);
    } else {
      CHECK(vec_mat(r2.certificate, a) == QVector(4, Rational(0)));
      CHECK(dot(r2.certificate, b2) != 0);
    }
  }
}

TEST_CASE("kernel_basis") {
  const auto k1 = kernel_basis(qmat({{1, 1}}));
  REQUIRE(k1.size() == 1);
  CHECK(k1[0][0] == -k1[0][1]);
  CHECK(k1[0][0] != 0);
  CHECK(kernel_basis(qmat({{2, 0, 1}, {0, 1, 0}, {1, 0, 1}})).empty());
  CHECK(kernel_basis(qmat({{0, 0, 0}, {0, 0, 0}})).size() == 3);

  sampling::Rng rng(sampling::seed_from_env());
  for (int t = 0; t < 30; ++t) {
    QMatrix a(3, 5, Rational(0));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 5; ++j)
        a(i, j) = sampling::random_rational(rng);
    const auto basis = kernel_basis(a);
    CHECK(basis.size() == 5 - oracle::dense_rank(oracle::dense(a)));
    CHECK(rank(a) == oracle::dense_rank(oracle::dense(a)));
    oracle::Dense cols;
    for (const auto& v : basis) {
      CHECK(mat_vec(a, v) == QVector(3, Rational(0)));
      cols.push_back(v);
    }
    CHECK(oracle::dense_rank(cols) == basis.size());
  }
}
