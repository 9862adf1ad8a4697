#include "atiyah_lab/sampling.hpp"

#include <cstdlib>
#include <string>

namespace alab::sampling {

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* env = std::getenv("ATIYAH_LAB_SEED");
  if (env == nullptr || *env == '\0')
    return fallback;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used, 10);
    if (used == std::string(env).size())
      return v;
  } catch (const std::exception&) {
  }
  return fallback;
}

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

Rational random_rational(Rng& rng) {
  if (uniform(rng, 0, 2) == 0)
    return Rational(0);
  int num = uniform(rng, -3, 3);
  if (num == 0)
    num = 1;
  Rational r(num, uniform(rng, 1, 3));
  r.canonicalize();
  return r;
}

Poly random_poly(Rng& rng, std::size_t nvars, int max_degree, int max_terms) {
  Poly p(nvars);
  const int terms = uniform(rng, 0, max_terms);
  for (int t = 0; t < terms; ++t) {
    Poly::Exponents e(nvars, 0);
    int left = uniform(rng, 0, max_degree);
    for (std::size_t v = 0; v < nvars && left > 0; ++v) {
      const unsigned d = static_cast<unsigned>(uniform(rng, 0, left));
      e[v] = d;
      left -= static_cast<int>(d);
    }
    p.add_term(e, random_rational(rng));
  }
  return p;
}

PolyMatrix random_poly_matrix(Rng& rng, std::size_t rows, std::size_t cols, std::size_t nvars, int max_degree) {
  PolyMatrix m = poly_zero_matrix(rows, cols, nvars);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = random_poly(rng, nvars, max_degree);
  return m;
}

point::PointConnection random_point_extension(Rng& rng, const point::LiePair& pair) {
  point::PointConnection conn = point::construct_default_extension(pair);
  const std::size_t n = pair.g.dim;
  const std::size_t q = pair.q;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t k = 0; k < n; ++k) {
        const bool leaves_j = b < q && k >= q;
        const bool bott_fixed = a < q && b >= q && k >= q;
        if (!leaves_j && !bott_fixed)
          conn.gamma(a, b, k) = random_rational(rng);
      }
  return conn;
}

point::CEForm random_ce_form(Rng& rng, int degree, std::size_t q, std::size_t m) {
  point::CEForm f = point::CEForm::zero(degree, q, m);
  for (auto& s : f.slots)
    for (std::size_t i = 0; i < s.size(); ++i)
      s.flat(i) = random_rational(rng);
  if (degree == 2) {
    for (std::size_t j1 = 0; j1 < q; ++j1) {
      f.slots[j1 * q + j1] = Tensor3<Rational>(m, m, m, Rational(0));
      for (std::size_t j2 = 0; j2 < j1; ++j2)
        for (std::size_t i = 0; i < f.slots[0].size(); ++i)
          f.slots[j1 * q + j2].flat(i) = -f.slots[j2 * q + j1].flat(i);
    }
  }
  return f;
}

chart::FullConnection random_chart_extension(Rng& rng, const chart::IisData& data, int max_degree) {
  const std::size_t n = data.alg.nvars;
  const std::size_t q = data.q;
  const std::size_t m = data.m();
  std::vector<PolyMatrix> transverse;
  std::vector<PolyMatrix> kconn;
  for (std::size_t mu = 0; mu < n; ++mu) {
    transverse.push_back(random_poly_matrix(rng, m, m, n, max_degree));
    kconn.push_back(random_poly_matrix(rng, q, q, n, max_degree));
  }
  chart::FullConnection conn = chart::construct_extension_chart(data, transverse, kconn);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t c = 0; c < q; ++c)
      for (std::size_t b = q; b < data.alg.rank; ++b)
        conn.gamma[mu](c, b) = random_poly(rng, n, max_degree);
  return conn;
}

chart::IisForm random_iis_form(Rng& rng, const chart::IisData& data, int degree, int max_degree) {
  const std::size_t p = data.p;
  chart::IisForm f = chart::IisForm::zero(degree, p, data.alg.nvars, data.m());
  for (auto& s : f.slots)
    for (auto& mat : s)
      mat = random_poly_matrix(rng, f.m, f.m, f.nvars, max_degree);
  if (degree == 2) {
    for (std::size_t a = 0; a < p; ++a) {
      for (auto& mat : f.slots[a * p + a])
        mat = poly_zero_matrix(f.m, f.m, f.nvars);
      for (std::size_t b = 0; b < a; ++b)
        for (std::size_t t = 0; t < f.slots[a * p + b].size(); ++t)
          f.slots[a * p + b][t] = -f.slots[b * p + a][t];
    }
  }
  return f;
}

}  // namespace alab::sampling
