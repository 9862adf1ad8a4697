#pragma once

#include <string>

#include "json.hpp"

#include "atiyah_lab/catalog.hpp"
#include "atiyah_lab/chart.hpp"
#include "atiyah_lab/point.hpp"

// JSON views of library values. Every index in these views is 1-based and
// quotient indices are reported as absolute basis positions (q + a + 1).
// nlohmann::json keeps object keys sorted, which makes dumps canonical.
namespace alab::report {

using Json = nlohmann::json;

Json to_json(const Rational& r);
Json to_json(const Poly& p);
Json to_json(const QVector& v);
Json to_json(const ValidationReport& r);

/// Nonzero entries as {"j": [...], "a1", "a2", "c", "value"}.
Json to_json(const point::CEForm& f);
/// Nonzero entries as {"mu": [...], "nu", "row", "col", "value"}.
Json to_json(const chart::IisForm& f);
Json to_json(const chart::PairForm& f);
Json to_json(const PolyMatrix& m);
Json to_json(const chart::IisCheck& c);

/// Input-document sections, the inverse of the CLI parser.
Json lie_algebra_section(const point::LieAlgebra& g);
Json chart_section(const chart::Algebroid& alg);
Json iis_section(const chart::IisData& data);
/// A complete input document for a catalog entry.
Json entry_document(const catalog::CatalogEntry& entry);

enum class Format { text, json };

/// Compact JSON, or one "path: value" line per leaf for text.
std::string emit(const Json& report, Format format);

}  // namespace alab::report
