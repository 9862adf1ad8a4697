#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "atiyah_lab/catalog.hpp"
#include "atiyah_lab/chart.hpp"
#include "atiyah_lab/errors.hpp"
#include "atiyah_lab/sampling.hpp"
#include "oracles.hpp"

using namespace alab;
using namespace alab::chart;

namespace {

Poly P(const char* text, std::size_t n) { return Poly::parse(text, n); }

PolyMatrix M(std::size_t n, std::initializer_list<std::initializer_list<const char*>> rows) {
  PolyMatrix m = poly_zero_matrix(rows.size(), rows.begin()->size(), n);
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (const char* t : row)
      m(i, j++) = P(t, n);
    ++i;
  }
  return m;
}

IisData iis_named(const std::string& name) { return catalog::find_entry(name)->iis(); }

Algebroid tangent(std::size_t n) {
  Algebroid alg = Algebroid::zero(n, n);
  for (std::size_t i = 0; i < n; ++i)
    alg.anchor(i, i) = Poly::constant(n, Rational(1));
  return alg;
}

/// Lie derivative bracket of vector fields written out by components.
VectorField oracle_vf_bracket(const VectorField& x, const VectorField& y) {
  const std::size_t n = x.size();
  VectorField out(n, Poly(n));
  for (std::size_t nu = 0; nu < n; ++nu)
    for (std::size_t mu = 0; mu < n; ++mu)
      out[nu] += x[mu] * poly_diff(y[nu], mu) - y[mu] * poly_diff(x[nu], mu);
  return out;
}

IisForm abelian_phi(const Poly& psi) {
  IisForm phi = IisForm::zero(0, 1, 2, 1);
  phi.slots[0][0](0, 0) = psi;
  return phi;
}

}  // namespace

TEST_CASE("validate_chart_algebroid") {
  CHECK(validate_chart_algebroid(tangent(2)).pass());
  CHECK(validate_chart_algebroid(Algebroid::zero(2, 3)).pass());

  const Algebroid action = iis_named("action_aff1_line").alg;
  CHECK(validate_chart_algebroid(action).pass());
  // rho[e1, e2] must equal [d1, x1 d1] = d1 = rho(e1).
  const VectorField lhs = oracle_vf_bracket({action.anchor(0, 0)}, {action.anchor(0, 1)});
  CHECK(lhs[0] == action.anchor(0, 0));

  // With [e1, e2] = e2 instead, the anchor is not a bracket morphism.
  Algebroid swapped = Algebroid::zero(1, 2);
  swapped.anchor = action.anchor;
  swapped.set_bracket(0, 1, 1, P("1", 1));
  const ValidationReport r = validate_chart_algebroid(swapped);
  REQUIRE_FALSE(r.pass());
  CHECK(r.violations[0].kind == "anchor_morphism");

  Algebroid skew = Algebroid::zero(1, 2);
  skew.structfn(0, 1, 0) = P("x1", 1);
  CHECK(validate_chart_algebroid(skew).violations[0].kind == "antisymmetry");
}

TEST_CASE("vector field bracket agrees with the component oracle") {
  sampling::Rng rng(sampling::seed_from_env());
  for (int t = 0; t < 20; ++t) {
    VectorField x, y;
    for (int i = 0; i < 3; ++i) {
      x.push_back(sampling::random_poly(rng, 3, 3));
      y.push_back(sampling::random_poly(rng, 3, 3));
    }
    CHECK(vector_field_bracket(x, y) == oracle_vf_bracket(x, y));
  }
}

TEST_CASE("bracket_sections") {
  const Algebroid t2 = tangent(2);
  const PolySection r = bracket_sections(t2, {P("1", 2), P("0", 2)}, {P("0", 2), P("x1", 2)});
  CHECK(r == PolySection{P("0", 2), P("1", 2)});

  const Algebroid action = iis_named("action_aff1_line").alg;
  const PolySection a{P("x1^2", 1), P("3*x1 + 1", 1)};
  CHECK(bracket_sections(action, a, a) == PolySection{Poly(1), Poly(1)});
  // [e1, x1 e2] = x1 [e1, e2] + rho(e1)(x1) e2 = x1 e1 + e2.
  const PolySection s = bracket_sections(action, {P("1", 1), P("0", 1)}, {P("0", 1), P("x1", 1)});
  CHECK(s == PolySection{P("x1", 1), P("1", 1)});

  sampling::Rng rng(sampling::seed_from_env());
  for (int t = 0; t < 10; ++t) {
    const PolySection u{sampling::random_poly(rng, 1, 2), sampling::random_poly(rng, 1, 2)};
    const PolySection v{sampling::random_poly(rng, 1, 2), sampling::random_poly(rng, 1, 2)};
    const PolySection uv = bracket_sections(action, u, v);
    const PolySection vu = bracket_sections(action, v, u);
    CHECK(uv[0] == -vu[0]);
    CHECK(uv[1] == -vu[1]);
  }
  CHECK_THROWS_AS(bracket_sections(action, {P("1", 1)}, s), InputError);
}

TEST_CASE("check_iis on small cases") {
  const IisCheck bott = check_iis(iis_named("tangent_bott_2_1"));
  CHECK(bott.iis1 == "pass");
  CHECK(bott.iis1_direct == "pass");
  CHECK(bott.iis2 == "pass");
  CHECK(bott.iis3 == "pass");
  CHECK(bott.frame_verified);
  CHECK(bott.rho_j_spans_fm);

  IisData j_zero;
  j_zero.alg = tangent(2);
  j_zero.p = 1;
  j_zero.q = 0;
  j_zero.christoffel = {poly_zero_matrix(2, 2, 2)};
  const IisCheck jz = check_iis(j_zero);
  CHECK(jz.iis1 == "pass");
  CHECK(jz.iis2 == "pass");
  CHECK(jz.iis3 == "pass");

  const IisCheck fail = check_iis(iis_named("action_aff1_line_iis_fail"));
  CHECK(fail.iis1 == "fail");
  CHECK_FALSE(fail.witnesses.empty());

  IisData bad_frame = iis_named("tangent_bott_2_1");
  bad_frame.flat_frame = M(2, {{"x1"}});
  CHECK_THROWS_AS(check_iis(bad_frame), InputError);
  bad_frame.flat_frame = M(2, {{"2"}});
  CHECK(check_iis(bad_frame).iis2 == "pass");
  bad_frame.flat_frame = M(2, {{"x2"}});
  CHECK_THROWS_AS(check_iis(bad_frame), InputError);

  IisData curved = iis_named("heisenberg_space");
  curved.christoffel[1] = M(3, {{"x1", "0"}, {"0", "0"}});
  CHECK_THROWS_AS(check_iis(curved), PreconditionError);
}

TEST_CASE("iis1 agrees with the parallel-frame criterion") {
  for (const auto& e : catalog::chart_entries()) {
    const IisCheck c = check_iis(e.iis());
    if (c.frame_verified)
      CHECK(c.iis1_direct == c.iis1);
  }
}

TEST_CASE("power series frame is parallel through the truncation degree") {
  const IisData data = iis_named("heisenberg_plane");
  const PolyMatrix frame = power_series_frame(data, 4);
  for (std::size_t mu = 0; mu < data.p; ++mu) {
    PolyMatrix d = derivative(frame, mu) + data.christoffel[mu] * frame;
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.cols(); ++j)
        CHECK(d(i, j).truncated(3).is_zero());
  }
}

TEST_CASE("is_chart_extension and construct_extension_chart") {
  const IisData bott = iis_named("tangent_bott_2_1");
  const FullConnection def = construct_extension_chart(bott);
  CHECK(is_chart_extension(bott, def).holds);
  for (const auto& g : def.gamma)
    CHECK(g.is_zero());

  FullConnection off = def;
  off.gamma[0](1, 0) = P("x2", 2);
  const ExtensionReport r = is_chart_extension(bott, off);
  CHECK_FALSE(r.holds);
  CHECK(r.failed_condition == "preserves_J");

  FullConnection transverse = def;
  transverse.gamma[1] = M(2, {{"x1", "x2^2"}, {"0", "3"}});
  CHECK(is_chart_extension(bott, transverse).holds);

  const IisData ab = iis_named("abelian_bundle");
  const FullConnection c0 = construct_extension_chart(ab);
  CHECK(c0.gamma[0] == M(2, {{"0", "0"}, {"0", "x2"}}));
  CHECK(c0.gamma[1].is_zero());
  const FullConnection c1 = construct_extension_chart(ab, std::vector<PolyMatrix>{M(2, {{"0"}}), M(2, {{"x1"}})});
  CHECK(c1.gamma[1] == M(2, {{"0", "0"}, {"0", "x1"}}));
  CHECK(is_chart_extension(ab, c1).holds);
}

TEST_CASE("extension_difference_form") {
  const IisData ab = iis_named("abelian_bundle");
  const FullConnection c0 = construct_extension_chart(ab);
  const FullConnection c1 = construct_extension_chart(ab, std::vector<PolyMatrix>{M(2, {{"0"}}), M(2, {{"x1"}})});
  CHECK(extension_difference_form(ab, c0, c0).is_zero());
  CHECK(extension_difference_form(ab, c1, c0) == abelian_phi(P("x1", 2)));

  const IisData bott = iis_named("tangent_bott_2_1");
  sampling::Rng rng(sampling::seed_from_env());
  FullConnection k1 = construct_extension_chart(bott);
  FullConnection k2 = k1;
  k1.gamma[0](0, 0) = sampling::random_poly(rng, 2, 2);
  k2.gamma[1](0, 0) = sampling::random_poly(rng, 2, 2);
  k2.gamma[1](0, 1) = sampling::random_poly(rng, 2, 2);
  CHECK(extension_difference_form(bott, k1, k2).is_zero());
}

TEST_CASE("atiyah_cocycle_iis") {
  for (const auto& e : catalog::chart_entries()) {
    FullConnection zero;
    for (std::size_t mu = 0; mu < e.iis().alg.nvars; ++mu)
      zero.gamma.push_back(poly_zero_matrix(e.iis().alg.rank, e.iis().alg.rank, e.iis().alg.nvars));
    bool christoffel_zero = true;
    for (const auto& g : e.iis().christoffel)
      christoffel_zero = christoffel_zero && g.is_zero();
    if (christoffel_zero)
      CHECK(atiyah_cocycle_iis(e.iis(), zero).is_zero());
  }

  const IisData ab = iis_named("abelian_bundle");
  IisForm expected = IisForm::zero(1, 1, 2, 1);
  expected.slots[0][0](0, 0) = P("-1", 2);
  CHECK(atiyah_cocycle_iis(ab, construct_extension_chart(ab)) == expected);
  expected.slots[0][0](0, 0) = P("x2 - 1", 2);
  CHECK(atiyah_cocycle_iis(ab, construct_extension_chart(ab, std::vector<PolyMatrix>{M(2, {{"0"}}), M(2, {{"x1*x2"}})})) ==
        expected);

  FullConnection off = construct_extension_chart(ab);
  off.gamma[1](1, 0) = P("1", 2);
  CHECK_THROWS_AS(atiyah_cocycle_iis(ab, off), PreconditionError);
}

TEST_CASE("Atiyah cocycle matches the curvature oracle") {
  sampling::Rng rng(sampling::seed_from_env());
  for (const auto& e : catalog::chart_entries()) {
    const IisData& data = e.iis();
    for (int t = 0; t < 3; ++t) {
      const FullConnection conn = sampling::random_chart_extension(rng, data);
      const IisForm omega = atiyah_cocycle_iis(data, conn);
      for (std::size_t mu = 0; mu < data.p; ++mu)
        for (std::size_t nu = data.p; nu < data.alg.nvars; ++nu) {
          const PolyMatrix r = oracle::chart_curvature(conn, mu, nu);
          CHECK(omega.slots[mu][nu - data.p] == r.block(data.q, data.q, data.m(), data.m()));
        }
    }
  }
}

TEST_CASE("d_iis") {
  const IisData ab = iis_named("abelian_bundle");
  CHECK(d_iis(ab, IisForm::zero(0, 1, 2, 1)).is_zero());
  for (const char* psi : {"x1^2*x2", "3*x2 - x1", "7"}) {
    IisForm expected = IisForm::zero(1, 1, 2, 1);
    expected.slots[0][0](0, 0) = poly_diff(P(psi, 2), 0);
    CHECK(d_iis(ab, abelian_phi(P(psi, 2))) == expected);
  }

  IisData flat2;
  flat2.alg = Algebroid::zero(3, 2);
  flat2.p = 2;
  flat2.q = 0;
  flat2.christoffel = {poly_zero_matrix(2, 2, 3), poly_zero_matrix(2, 2, 3)};
  sampling::Rng rng(sampling::seed_from_env());
  const IisForm phi = sampling::random_iis_form(rng, flat2, 0);
  const IisForm dphi = d_iis(flat2, phi);
  for (std::size_t mu = 0; mu < 2; ++mu)
    CHECK(dphi.slots[mu][0] == derivative(phi.slots[0][0], mu));
  CHECK_THROWS_AS(d_iis(flat2, IisForm::zero(2, 2, 3, 2)), InputError);
}

TEST_CASE("primitive_search") {
  const IisData ab = iis_named("abelian_bundle");
  const PrimitiveResult z = primitive_search(ab, IisForm::zero(1, 1, 2, 1));
  REQUIRE(z.found);
  CHECK(z.primitive.is_zero());

  IisForm omega = IisForm::zero(1, 1, 2, 1);
  omega.slots[0][0](0, 0) = P("-1", 2);
  const PrimitiveResult r = primitive_search(ab, omega, 1);
  REQUIRE(r.found);
  CHECK(r.primitive == abelian_phi(P("-x1", 2)));
  CHECK_FALSE(primitive_search(ab, omega, 0).found);
  CHECK(default_primitive_degree(omega) == 4);

  IisData flat2;
  flat2.alg = Algebroid::zero(2, 1);
  flat2.p = 1;
  flat2.q = 0;
  flat2.christoffel = {poly_zero_matrix(1, 1, 2)};
  IisForm linear = IisForm::zero(1, 1, 2, 1);
  linear.slots[0][0](0, 0) = P("x1", 2);
  const PrimitiveResult lr = primitive_search(flat2, linear, 2);
  REQUIRE(lr.found);
  CHECK(lr.primitive.slots[0][0](0, 0) == P("1/2*x1^2", 2));
}

TEST_CASE("basic connection") {
  const Algebroid t2 = tangent(2);
  FullConnection zero{{poly_zero_matrix(2, 2, 2), poly_zero_matrix(2, 2, 2)}};
  for (const auto& b : basic_connection(t2, zero))
    CHECK(b.is_zero());

  const Algebroid ab = Algebroid::zero(2, 2);
  sampling::Rng rng(sampling::seed_from_env());
  FullConnection any{{sampling::random_poly_matrix(rng, 2, 2, 2, 2), sampling::random_poly_matrix(rng, 2, 2, 2, 2)}};
  for (const auto& b : basic_connection(ab, any))
    CHECK(b.is_zero());

  const IisData action = iis_named("action_aff1_line");
  const FullConnection conn = sampling::random_chart_extension(rng, action);
  const auto table = basic_connection(action.alg, conn);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        Poly v = action.alg.structfn(i, j, k);
        v += action.alg.anchor(0, j) * conn.gamma[0](k, i);
        CHECK(table[i](k, j) == v);
      }
}

TEST_CASE("pair_cocycle and rho_star") {
  const Algebroid ab = Algebroid::zero(2, 2);
  FullConnection any{{poly_zero_matrix(2, 2, 2), poly_zero_matrix(2, 2, 2)}};
  sampling::Rng rng(sampling::seed_from_env());
  any.gamma[0](1, 1) = sampling::random_poly(rng, 2, 2);
  CHECK(pair_cocycle(ab, 1, any).is_zero());

  const IisData bott = iis_named("tangent_bott_2_1");
  CHECK(pair_cocycle(bott.alg, 1, construct_extension_chart(bott)).is_zero());
  CHECK(rho_star(bott.alg, bott, IisForm::zero(1, 1, 2, 1)).is_zero());

  IisData j_zero;
  j_zero.alg = tangent(2);
  j_zero.p = 1;
  j_zero.q = 0;
  j_zero.christoffel = {poly_zero_matrix(2, 2, 2)};
  const PairForm empty = rho_star(j_zero.alg, j_zero, sampling::random_iis_form(rng, j_zero, 1));
  CHECK(empty.slots.empty());

  for (const char* name : {"action_aff1_line", "heisenberg_plane", "heisenberg_space", "frame_twisted_plane"}) {
    const IisData data = iis_named(name);
    for (int t = 0; t < 3; ++t) {
      const FullConnection conn = sampling::random_chart_extension(rng, data);
      CHECK(rho_star(data.alg, data, atiyah_cocycle_iis(data, conn)) == pair_cocycle(data.alg, data.q, conn));
    }
  }

  IisData broken = iis_named("action_aff1_line");
  broken.alg = Algebroid::zero(2, 2);
  broken.alg.anchor(1, 0) = P("1", 2);
  CHECK_THROWS_AS(rho_star(broken.alg, broken, IisForm::zero(1, 1, 2, 1)), InputError);
}

TEST_CASE("coordinate fibrations") {
  const FibrationResult t = make_coordinate_fibration(tangent(2), 1, 1);
  REQUIRE(t.fibered);
  CHECK(t.quotient.nvars == 1);
  CHECK(t.quotient.rank == 1);
  CHECK(t.quotient.anchor(0, 0) == P("1", 1));
  for (const auto& g : t.projectable_conn.gamma)
    CHECK(g.is_zero());
  CHECK(atiyah_cocycle_iis(t.nabla_phi, t.projectable_conn).is_zero());

  const FibrationResult ab = make_coordinate_fibration(Algebroid::zero(3, 4), 1, 2);
  REQUIRE(ab.fibered);
  CHECK(ab.quotient.rank == 2);
  CHECK(ab.quotient.nvars == 2);

  const IisData dil = iis_named("action_aff1_line_dilation");
  const FibrationResult d = make_coordinate_fibration(dil.alg, 1, 1);
  REQUIRE_FALSE(d.fibered);
  CHECK(d.witness_condition == "ideal");

  const FibrationResult h = make_coordinate_fibration(iis_named("heisenberg_plane").alg, 1, 1);
  CHECK_FALSE(h.fibered);

  const FibrationResult with_conn =
      make_coordinate_fibration(Algebroid::zero(2, 2), 1, 1, std::vector<PolyMatrix>{M(1, {{"x1^2"}})});
  REQUIRE(with_conn.fibered);
  CHECK(with_conn.projectable_conn.gamma[1](1, 1) == P("x2^2", 2));
  CHECK(atiyah_cocycle_iis(with_conn.nabla_phi, with_conn.projectable_conn).is_zero());
}
