#pragma once

#include <cstdint>
#include <random>

#include "atiyah_lab/chart.hpp"
#include "atiyah_lab/point.hpp"

// Seeded generators for randomized property checks.
namespace alab::sampling {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// ATIYAH_LAB_SEED when set to an unsigned integer, else `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback = kDefaultSeed);

/// Small rationals n/d with |n| <= 3, 1 <= d <= 3; zero with probability ~1/3.
Rational random_rational(Rng& rng);
Poly random_poly(Rng& rng, std::size_t nvars, int max_degree, int max_terms = 3);
PolyMatrix random_poly_matrix(Rng& rng, std::size_t rows, std::size_t cols, std::size_t nvars, int max_degree);

/// Default extension plus random values in every entry the extension
/// conditions leave free.
point::PointConnection random_point_extension(Rng& rng, const point::LiePair& pair);
point::CEForm random_ce_form(Rng& rng, int degree, std::size_t q, std::size_t m);

/// Random J-block, random mixed J <- quotient block and random transverse
/// quotient blocks; the F_M quotient blocks stay equal to the Christoffel data.
chart::FullConnection random_chart_extension(Rng& rng, const chart::IisData& data, int max_degree = 2);
chart::IisForm random_iis_form(Rng& rng, const chart::IisData& data, int degree, int max_degree = 2);

}  // namespace alab::sampling
