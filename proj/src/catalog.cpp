#include "atiyah_lab/catalog.hpp"

#include "atiyah_lab/errors.hpp"

namespace alab::catalog {

namespace {

using chart::Algebroid;
using chart::IisData;
using point::LiePair;

Poly P(const char* text, std::size_t nvars) { return Poly::parse(text, nvars); }

PolyMatrix poly_matrix(std::size_t nvars, std::initializer_list<std::initializer_list<const char*>> rows) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr == 0 ? 0 : rows.begin()->size();
  PolyMatrix m = poly_zero_matrix(nr, nc, nvars);
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (const char* text : row)
      m(i, j++) = P(text, nvars);
    ++i;
  }
  return m;
}

std::map<std::string, std::string> chart_expect(const char* iis1, const char* iis2, const char* iis3,
                                                const char* fibration, const char* default_cocycle) {
  return {{"validate", "pass"},     {"iis1", iis1},          {"iis2", iis2},
          {"iis3", iis3},           {"fibration", fibration}, {"default_cocycle", default_cocycle}};
}

CatalogEntry point_entry(std::string name, LiePair pair, const char* naive, const char* atiyah) {
  return {std::move(name), std::move(pair), {{"naive_ideal", naive}, {"atiyah", atiyah}}};
}

}  // namespace

CatalogEntry tangent_bott(std::size_t n, std::size_t p) {
  if (p < 1 || p > n)
    throw InputError("tangent_bott requires 1 <= p <= n");
  IisData data;
  data.alg = Algebroid::zero(n, n);
  for (std::size_t i = 0; i < n; ++i)
    data.alg.anchor(i, i) = Poly::constant(n, Rational(1));
  data.p = p;
  data.q = p;
  data.christoffel.assign(p, poly_zero_matrix(n - p, n - p, n));
  data.flat_frame = poly_identity(n - p, n);
  return {"tangent_bott_" + std::to_string(n) + "_" + std::to_string(p), std::move(data),
          chart_expect("pass", "pass", "pass", "fibered", "zero")};
}

std::vector<CatalogEntry> point_pairs() {
  std::vector<CatalogEntry> out;
  for (std::size_t q : {1, 2})
    out.push_back(point_entry("abelian3_q" + std::to_string(q), {point::LieAlgebra::zero(3), q}, "true", "vanishes"));

  LiePair aff1{point::LieAlgebra::zero(2), 1};
  aff1.g.set_bracket(0, 1, 1, Rational(1));
  out.push_back(point_entry("aff1", aff1, "false", "vanishes"));

  // Heisenberg basis reordered so the center comes first: f1 = z, [f2, f3] = f1.
  LiePair center{point::LieAlgebra::zero(3), 1};
  center.g.set_bracket(1, 2, 0, Rational(1));
  out.push_back(point_entry("heisenberg_center", center, "true", "vanishes"));

  LiePair noncentral{point::LieAlgebra::zero(3), 1};
  noncentral.g.set_bracket(0, 1, 2, Rational(1));
  out.push_back(point_entry("heisenberg_noncentral", noncentral, "false", "vanishes"));

  // sl2 with H, E, F: [H,E] = E, [H,F] = -F, [E,F] = H; J = span{H, E}.
  LiePair borel{point::LieAlgebra::zero(3), 2};
  borel.g.set_bracket(0, 1, 1, Rational(1));
  borel.g.set_bracket(0, 2, 2, Rational(-1));
  borel.g.set_bracket(1, 2, 0, Rational(1));
  out.push_back(point_entry("sl2_borel", borel, "false", "nonzero"));
  return out;
}

CatalogEntry action_aff1_line(Aff1Variant variant) {
  IisData data;
  data.alg = Algebroid::zero(1, 2);
  data.p = 1;
  data.q = 1;
  if (variant == Aff1Variant::dilation) {
    // f1 = e2 (dilation), f2 = e1 (translation): [f1, f2] = -f2.
    data.alg.anchor(0, 0) = P("x1", 1);
    data.alg.anchor(0, 1) = P("1", 1);
    data.alg.set_bracket(0, 1, 1, P("-1", 1));
    data.christoffel = {poly_matrix(1, {{"0"}})};
    data.flat_frame = poly_matrix(1, {{"1"}});
    return {"action_aff1_line_dilation", std::move(data),
            chart_expect("fail", "fail", "pass", "not_fibered", "zero")};
  }
  data.alg.anchor(0, 0) = P("1", 1);
  data.alg.anchor(0, 1) = P("x1", 1);
  data.alg.set_bracket(0, 1, 0, P("1", 1));
  if (variant == Aff1Variant::iis_fail) {
    data.christoffel = {poly_matrix(1, {{"1"}})};
    return {"action_aff1_line_iis_fail", std::move(data), chart_expect("fail", "fail", "pass", "fibered", "zero")};
  }
  data.christoffel = {poly_matrix(1, {{"0"}})};
  data.flat_frame = poly_matrix(1, {{"1"}});
  return {"action_aff1_line", std::move(data), chart_expect("pass", "pass", "pass", "fibered", "zero")};
}

CatalogEntry heisenberg_plane() {
  IisData data;
  data.alg = Algebroid::zero(2, 3);
  data.alg.anchor(0, 0) = P("1", 2);
  data.alg.anchor(1, 2) = P("1", 2);
  data.alg.set_bracket(0, 2, 1, P("-1", 2));
  data.p = 1;
  data.q = 1;
  data.christoffel = {poly_matrix(2, {{"0", "-1"}, {"0", "0"}})};
  data.flat_frame = poly_matrix(2, {{"1", "x1"}, {"0", "1"}});
  return {"heisenberg_plane", std::move(data), chart_expect("pass", "pass", "pass", "not_fibered", "zero")};
}

CatalogEntry heisenberg_space() {
  IisData data;
  data.alg = Algebroid::zero(3, 4);
  data.alg.anchor(0, 0) = P("1", 3);
  data.alg.anchor(1, 1) = P("1", 3);
  data.alg.anchor(2, 3) = P("1", 3);
  data.alg.set_bracket(0, 3, 2, P("-1", 3));
  data.p = 2;
  data.q = 2;
  data.christoffel = {poly_matrix(3, {{"0", "-1"}, {"0", "0"}}), poly_matrix(3, {{"0", "0"}, {"0", "0"}})};
  data.flat_frame = poly_matrix(3, {{"1", "x1"}, {"0", "1"}});
  return {"heisenberg_space", std::move(data), chart_expect("pass", "pass", "pass", "not_fibered", "zero")};
}

CatalogEntry abelian_bundle() {
  IisData data;
  data.alg = Algebroid::zero(2, 2);
  data.p = 1;
  data.q = 1;
  data.christoffel = {poly_matrix(2, {{"x2"}})};
  return {"abelian_bundle", std::move(data), chart_expect("pass", "pass", "pass", "fibered", "nonzero")};
}

CatalogEntry frame_twisted_plane() {
  IisData data;
  data.alg = Algebroid::zero(2, 2);
  data.alg.anchor(0, 0) = P("1", 2);
  data.alg.anchor(0, 1) = P("x1", 2);
  data.alg.anchor(1, 1) = P("1", 2);
  data.alg.set_bracket(0, 1, 0, P("1", 2));
  data.p = 1;
  data.q = 1;
  data.christoffel = {poly_matrix(2, {{"0"}})};
  data.flat_frame = poly_matrix(2, {{"1"}});
  return {"frame_twisted_plane", std::move(data), chart_expect("pass", "pass", "pass", "fibered", "zero")};
}

std::vector<CatalogEntry> chart_entries() {
  std::vector<CatalogEntry> out;
  for (auto [n, p] : {std::pair<std::size_t, std::size_t>{2, 1}, {1, 1}, {3, 2}, {3, 1}})
    out.push_back(tangent_bott(n, p));
  out.push_back(action_aff1_line(Aff1Variant::standard));
  out.push_back(action_aff1_line(Aff1Variant::iis_fail));
  out.push_back(action_aff1_line(Aff1Variant::dilation));
  out.push_back(heisenberg_plane());
  out.push_back(heisenberg_space());
  out.push_back(abelian_bundle());
  out.push_back(frame_twisted_plane());
  return out;
}

std::vector<CatalogEntry> all_entries() {
  std::vector<CatalogEntry> out = point_pairs();
  for (auto& e : chart_entries())
    out.push_back(std::move(e));
  return out;
}

std::optional<CatalogEntry> find_entry(const std::string& name) {
  for (auto& e : all_entries())
    if (e.name == name)
      return e;
  return std::nullopt;
}

namespace {

bool jacobi_holds(const point::LieAlgebra& g) {
  const std::size_t n = g.dim;
  Rational v;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          v = 0;
          for (std::size_t s = 0; s < n; ++s)
            v += g.c(i, j, s) * g.c(s, k, l) + g.c(j, k, s) * g.c(s, i, l) + g.c(k, i, s) * g.c(s, j, l);
          if (v != 0)
            return false;
        }
  return true;
}

}  // namespace

SearchResult search_nonvanishing_pair(std::size_t max_dim, const std::vector<Rational>& coeff_set) {
  if (max_dim > 5)
    throw InputError("search_nonvanishing_pair supports max_dim <= 5");
  if (coeff_set.empty())
    throw InputError("search_nonvanishing_pair needs a nonempty coefficient set");
  SearchResult result;
  result.max_dim = max_dim;
  result.coeff_set = coeff_set;
  for (std::size_t dim = 2; dim <= max_dim; ++dim)
    for (std::size_t q = 1; q < dim; ++q) {
      struct Position {
        std::size_t i, j, k;
      };
      std::vector<Position> positions;
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j)
          for (std::size_t k = 0; k < dim; ++k)
            if (!(j < q && k >= q))
              positions.push_back({i, j, k});
      std::vector<std::size_t> digits(positions.size(), 0);
      for (;;) {
        ++result.candidates;
        LiePair pair{point::LieAlgebra::zero(dim), q};
        for (std::size_t s = 0; s < positions.size(); ++s)
          pair.g.set_bracket(positions[s].i, positions[s].j, positions[s].k, coeff_set[digits[s]]);
        if (jacobi_holds(pair.g)) {
          ++result.lie_pairs;
          point::PairDecision decision = point::atiyah_class_decide(pair);
          if (!decision.vanishes) {
            result.entry = CatalogEntry{"search_witness_dim" + std::to_string(dim) + "_q" + std::to_string(q), pair,
                                        {{"naive_ideal", "false"}, {"atiyah", "nonzero"}}};
            result.decision = std::move(decision);
            return result;
          }
        }
        // Odometer step, last position fastest.
        std::size_t s = positions.size();
        while (s > 0 && ++digits[s - 1] == coeff_set.size())
          digits[--s] = 0;
        if (s == 0)
          break;
      }
    }
  return result;
}

}  // namespace alab::catalog
