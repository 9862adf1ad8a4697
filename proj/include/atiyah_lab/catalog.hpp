#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "atiyah_lab/chart.hpp"
#include "atiyah_lab/point.hpp"

namespace alab::catalog {

/// A named example with the verdicts its checks are expected to produce.
/// Point keys: "naive_ideal", "atiyah". Chart keys: "validate", "iis1",
/// "iis2", "iis3", "fibration", "default_cocycle".
struct CatalogEntry {
  std::string name;
  std::variant<point::LiePair, chart::IisData> payload;
  std::map<std::string, std::string> expected;

  bool is_point() const { return std::holds_alternative<point::LiePair>(payload); }
  const point::LiePair& pair() const { return std::get<point::LiePair>(payload); }
  const chart::IisData& iis() const { return std::get<chart::IisData>(payload); }
};

/// Tangent algebroid of R^n with F_M = J = span of the first p coordinate fields.
CatalogEntry tangent_bott(std::size_t n, std::size_t p);

std::vector<CatalogEntry> point_pairs();

enum class Aff1Variant {
  standard,  ///< J = translations, Gamma = 0
  iis_fail,  ///< J = translations, Gamma_1 = [1]
  dilation,  ///< J = dilations, Gamma = 0
};

/// Action algebroid of aff(1) on the line: rho(e1) = d1, rho(e2) = x1 d1, [e1, e2] = e1.
CatalogEntry action_aff1_line(Aff1Variant variant = Aff1Variant::standard);

/// Rank-3 algebroid on R^2 with [e1, e3] = -e2, rho = (d1, 0, d2), J = span{e1}.
CatalogEntry heisenberg_plane();
/// Rank-4 algebroid on R^3 with [e1, e4] = -e3, rho = (d1, d2, 0, d3), J = span{e1, e2}.
CatalogEntry heisenberg_space();
/// Abelian rank-2 bundle over R^2, J = span{e1}, Gamma_1 = [x2]; no polynomial flat frame.
CatalogEntry abelian_bundle();
/// TR^2 in the frame e1 = d1, e2 = x1 d1 + d2, J = span{e1}.
CatalogEntry frame_twisted_plane();

std::vector<CatalogEntry> chart_entries();
std::vector<CatalogEntry> all_entries();
std::optional<CatalogEntry> find_entry(const std::string& name);

struct SearchResult {
  std::size_t max_dim = 0;
  std::vector<Rational> coeff_set;
  std::size_t candidates = 0;   ///< assignments enumerated before stopping
  std::size_t lie_pairs = 0;    ///< of those, valid Lie pairs
  std::optional<CatalogEntry> entry;
  std::optional<point::PairDecision> decision;
};

/// Enumerates dimensions 2..max_dim, then q = 1..dim-1, then structure
/// constants c(i,j,k) for i < j in lexicographic (i, j, k) order with the
/// last position varying fastest, values taken in coeff_set order. Entries
/// forced to zero by closure of J are skipped. Returns the first valid pair
/// whose Atiyah class does not vanish.
SearchResult search_nonvanishing_pair(std::size_t max_dim, const std::vector<Rational>& coeff_set);

}  // namespace alab::catalog
