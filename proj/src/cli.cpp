#include "atiyah_lab/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"

#include "atiyah_lab/catalog.hpp"
#include "atiyah_lab/errors.hpp"
#include "atiyah_lab/sampling.hpp"

#ifndef ATIYAH_LAB_GOLDEN_DIR
#define ATIYAH_LAB_GOLDEN_DIR ""
#endif

namespace alab::cli {

using report::Json;

namespace {

constexpr std::pair<Task, const char*> kTaskNames[] = {
    {Task::validate, "validate"},         {Task::atiyah_pair, "atiyah-pair"},
    {Task::atiyah_iis, "atiyah-iis"},     {Task::check_iis, "check-iis"},
    {Task::rho_star_check, "rho-star-check"}, {Task::fibration, "fibration"},
    {Task::catalog, "catalog"},
};

constexpr int kRandomExtensions = 5;
constexpr int kRandomForms = 3;

}  // namespace

std::optional<Task> parse_task(std::string_view name) {
  for (const auto& [task, text] : kTaskNames)
    if (name == text)
      return task;
  return std::nullopt;
}

std::string task_name(Task task) {
  for (const auto& [t, text] : kTaskNames)
    if (t == task)
      return text;
  return "?";
}

// --- input parsing ---------------------------------------------------------------

namespace {

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object())
    throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end())
    throw SchemaError(at(path, key), "missing");
  return *it;
}

const Json& require_array(const Json& value, const std::string& path, std::optional<std::size_t> size = {}) {
  if (!value.is_array())
    throw SchemaError(path, "expected an array");
  if (size && value.size() != *size)
    throw SchemaError(path, "expected " + std::to_string(*size) + " elements, found " + std::to_string(value.size()));
  return value;
}

std::size_t as_count(const Json& value, const std::string& path, std::size_t lo, std::size_t hi) {
  if (!value.is_number_integer())
    throw SchemaError(path, "expected an integer");
  const auto v = value.get<long long>();
  if (v < static_cast<long long>(lo) || v > static_cast<long long>(hi))
    throw SchemaError(path, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
  return static_cast<std::size_t>(v);
}

/// 1-based index in [1, bound], returned 0-based.
std::size_t as_index(const Json& value, const std::string& path, std::size_t bound) {
  return as_count(value, path, 1, bound) - 1;
}

Rational rational_text(const std::string& text, const std::string& path) {
  try {
    return parse_rational(text);
  } catch (const SyntaxError& e) {
    throw SyntaxError(e.position(), "field '" + path + "': " + e.detail());
  } catch (const InputError& e) {
    throw SchemaError(path, e.what());
  }
}

Rational as_rational(const Json& value, const std::string& path) {
  if (value.is_number_integer())
    return Rational(value.dump(), 10);
  if (value.is_string())
    return rational_text(value.get<std::string>(), path);
  if (value.is_object()) {
    auto part = [&](const char* key) -> mpz_class {
      const Json& v = require(value, key, path);
      if (v.is_number_integer())
        return mpz_class(v.dump(), 10);
      if (v.is_string()) {
        const Rational r = rational_text(v.get<std::string>(), at(path, key));
        if (r.get_den() != 1)
          throw SchemaError(at(path, key), "expected an integer");
        return r.get_num();
      }
      throw SchemaError(at(path, key), "expected an integer");
    };
    const mpz_class num = part("numerator");
    const mpz_class den = part("denominator");
    if (den == 0)
      throw SchemaError(at(path, "denominator"), "zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  throw SchemaError(path, "expected a rational (\"p/q\", integer, or {numerator, denominator})");
}

Poly as_poly(const Json& value, const std::string& path, std::size_t nvars) {
  if (value.is_number_integer())
    return Poly::constant(nvars, Rational(value.dump(), 10));
  if (!value.is_string())
    throw SchemaError(path, "expected a polynomial string");
  try {
    return Poly::parse(value.get<std::string>(), nvars);
  } catch (const SyntaxError& e) {
    throw SyntaxError(e.position(), "field '" + path + "': " + e.detail());
  }
}

PolyMatrix as_poly_matrix(const Json& value, const std::string& path, std::size_t rows, std::size_t cols,
                          std::size_t nvars) {
  require_array(value, path, rows);
  PolyMatrix m = poly_zero_matrix(rows, cols, nvars);
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& row = require_array(value[i], at(path, i), cols);
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = as_poly(row[j], at(at(path, i), j), nvars);
  }
  return m;
}

// Brackets listed as {i, j, coeffs: [[k, value]]}; the (j, i) partner is
// filled with the negative unless it is listed explicitly.
template <typename T, typename Parse>
void parse_brackets(const Json& list, const std::string& path, std::size_t dim, Tensor3<T>& c, Parse parse_value) {
  require_array(list, path);
  std::vector<std::vector<bool>> given(dim, std::vector<bool>(dim, false));
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, T>> entries;
  for (std::size_t n = 0; n < list.size(); ++n) {
    const std::string p = at(path, n);
    const std::size_t i = as_index(require(list[n], "i", p), at(p, "i"), dim);
    const std::size_t j = as_index(require(list[n], "j", p), at(p, "j"), dim);
    if (given[i][j])
      throw SchemaError(p, "bracket listed twice");
    given[i][j] = true;
    const Json& coeffs = require_array(require(list[n], "coeffs", p), at(p, "coeffs"));
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
      const std::string cp = at(at(p, "coeffs"), t);
      const Json& pairv = require_array(coeffs[t], cp, 2);
      const std::size_t k = as_index(pairv[0], at(cp, 0), dim);
      entries.emplace_back(i, j, k, parse_value(pairv[1], at(cp, 1)));
    }
  }
  for (const auto& [i, j, k, v] : entries)
    c(i, j, k) += v;
  for (const auto& [i, j, k, v] : entries)
    if (!given[j][i])
      c(j, i, k) -= v;
}

point::LieAlgebra parse_lie_algebra(const Json& sec) {
  const std::string path = "lie_algebra";
  const std::size_t dim = as_count(require(sec, "dim", path), at(path, "dim"), 1, 64);
  point::LieAlgebra g = point::LieAlgebra::zero(dim);
  if (sec.contains("brackets"))
    parse_brackets(sec["brackets"], at(path, "brackets"), dim, g.c,
                   [](const Json& v, const std::string& p) { return as_rational(v, p); });
  return g;
}

chart::Algebroid parse_chart(const Json& sec) {
  const std::string path = "chart";
  const std::size_t n = as_count(require(sec, "nvars", path), at(path, "nvars"), 0, 16);
  const std::size_t r = as_count(require(sec, "rank", path), at(path, "rank"), 0, 32);
  chart::Algebroid alg = chart::Algebroid::zero(n, r);
  alg.anchor = as_poly_matrix(require(sec, "anchor", path), at(path, "anchor"), n, r, n);
  if (sec.contains("structfn"))
    parse_brackets(sec["structfn"], at(path, "structfn"), r, alg.structfn,
                   [n](const Json& v, const std::string& p) { return as_poly(v, p, n); });
  return alg;
}

chart::IisData parse_iis(const Json& sec, const chart::Algebroid& alg) {
  const std::string path = "iis";
  chart::IisData data;
  data.alg = alg;
  data.p = as_count(require(sec, "p", path), at(path, "p"), 0, alg.nvars);
  data.q = as_count(require(sec, "q", path), at(path, "q"), 0, alg.rank);
  const std::size_t m = data.m();
  const Json& chris = require_array(require(sec, "christoffel", path), at(path, "christoffel"), data.p);
  for (std::size_t mu = 0; mu < data.p; ++mu)
    data.christoffel.push_back(as_poly_matrix(chris[mu], at(at(path, "christoffel"), mu), m, m, alg.nvars));
  if (sec.contains("flat_frame") && !sec["flat_frame"].is_null())
    data.flat_frame = as_poly_matrix(sec["flat_frame"], at(path, "flat_frame"), m, m, alg.nvars);
  return data;
}

chart::FullConnection parse_connection(const Json& sec, const chart::Algebroid& alg) {
  const std::string path = "connection.gamma";
  const Json& list = require_array(require(sec, "gamma", "connection"), path, alg.nvars);
  chart::FullConnection conn;
  for (std::size_t mu = 0; mu < alg.nvars; ++mu)
    conn.gamma.push_back(as_poly_matrix(list[mu], at(path, mu), alg.rank, alg.rank, alg.nvars));
  return conn;
}

Options parse_options(const Json& sec) {
  Options o;
  if (!sec.is_object())
    throw SchemaError("options", "expected an object");
  if (sec.contains("degree_bound"))
    o.degree_bound = static_cast<int>(as_count(sec["degree_bound"], "options.degree_bound", 0, 64));
  if (sec.contains("format")) {
    const Json& f = sec["format"];
    if (f == "text")
      o.format = report::Format::text;
    else if (f == "json")
      o.format = report::Format::json;
    else
      throw SchemaError("options.format", "expected \"text\" or \"json\"");
  }
  if (sec.contains("seed")) {
    if (!sec["seed"].is_number_unsigned())
      throw SchemaError("options.seed", "expected a nonnegative integer");
    o.seed = sec["seed"].get<std::uint64_t>();
  }
  return o;
}

}  // namespace

TaskRequest parse_input(std::string_view text, Task task) {
  TaskRequest req;
  req.task = task;
  Json doc;
  bool blank = text.find_first_not_of(" \t\r\n") == std::string_view::npos;
  if (!blank) {
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw SyntaxError(e.byte == 0 ? 0 : e.byte - 1, "malformed JSON document");
    }
    if (!doc.is_object())
      throw SchemaError("(document)", "expected an object");
  } else {
    doc = Json::object();
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    static const char* known[] = {"lie_algebra", "subalgebra", "chart", "iis", "connection", "fibration", "options"};
    if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known))
      throw SchemaError(it.key(), "unknown section");
  }

  if (doc.contains("lie_algebra"))
    req.lie_algebra = parse_lie_algebra(doc["lie_algebra"]);
  if (doc.contains("subalgebra")) {
    if (!req.lie_algebra)
      throw SchemaError("subalgebra", "requires a lie_algebra section");
    req.subalgebra_q = as_count(require(doc["subalgebra"], "q", "subalgebra"), "subalgebra.q", 0, req.lie_algebra->dim);
  }
  if (doc.contains("chart"))
    req.chart = parse_chart(doc["chart"]);
  if (doc.contains("iis")) {
    if (!req.chart)
      throw SchemaError("iis", "requires a chart section");
    req.iis = parse_iis(doc["iis"], *req.chart);
  }
  if (doc.contains("connection")) {
    if (!req.chart)
      throw SchemaError("connection", "requires a chart section");
    req.connection = parse_connection(doc["connection"], *req.chart);
  }
  if (doc.contains("fibration")) {
    if (!req.chart)
      throw SchemaError("fibration", "requires a chart section");
    const Json& f = doc["fibration"];
    req.fibration = {as_count(require(f, "p", "fibration"), "fibration.p", 0, req.chart->nvars),
                     as_count(require(f, "q", "fibration"), "fibration.q", 0, req.chart->rank)};
  }
  if (doc.contains("options"))
    req.options = parse_options(doc["options"]);

  const std::string name = task_name(task);
  switch (task) {
    case Task::validate:
      if (!req.lie_algebra && !req.chart)
        throw SchemaError("lie_algebra", "task validate needs a lie_algebra or chart section");
      break;
    case Task::atiyah_pair:
      if (!req.lie_algebra)
        throw SchemaError("lie_algebra", "required for task " + name);
      if (!req.subalgebra_q)
        throw SchemaError("subalgebra", "required for task " + name);
      break;
    case Task::atiyah_iis:
    case Task::check_iis:
    case Task::rho_star_check:
      if (!req.chart)
        throw SchemaError("chart", "required for task " + name);
      if (!req.iis)
        throw SchemaError("iis", "required for task " + name);
      break;
    case Task::fibration:
      if (!req.chart)
        throw SchemaError("chart", "required for task " + name);
      if (!req.fibration && !req.iis)
        throw SchemaError("fibration", "task fibration needs a fibration or iis section for p and q");
      break;
    case Task::catalog:
      break;
  }
  return req;
}

// --- tasks ---------------------------------------------------------------------

namespace {

Json pair_certificate(const point::PairDecision& d) {
  if (d.vanishes)
    return {{"primitive", report::to_json(d.primitive)}};
  return {{"fredholm", report::to_json(d.certificate)}, {"pairing", to_string(dot(d.certificate, d.rhs))}};
}

Json pair_decision_json(const point::LiePair& pair, const point::PairDecision& d) {
  return {{"verdict", d.vanishes ? "vanishes" : "nonzero"},
          {"naive_ideal", point::naive_ideal_check(pair)},
          {"cocycle", report::to_json(d.cocycle)},
          {"certificate", pair_certificate(d)},
          {"system", {{"rows", d.system.rows()}, {"cols", d.system.cols()}}}};
}

Report violations_report(Json body, const ValidationReport& v) {
  body["status"] = "axiom_violation";
  body["violations"] = report::to_json(v);
  return {std::move(body), kAxiomViolation};
}

std::uint64_t seed_of(const TaskRequest& req) { return req.options.seed.value_or(sampling::seed_from_env()); }

Report run_validate(const TaskRequest& req) {
  Json body = {{"task", "validate"}};
  ValidationReport v;
  if (req.lie_algebra) {
    v = point::validate_lie_algebra(*req.lie_algebra);
    if (req.subalgebra_q) {
      const auto closure = point::check_subalgebra({*req.lie_algebra, *req.subalgebra_q});
      v.violations.insert(v.violations.end(), closure.violations.begin(), closure.violations.end());
    }
    body["payload"] = "lie_algebra";
  } else {
    v = req.iis ? chart::validate_iis_data(*req.iis) : chart::validate_chart_algebroid(*req.chart);
    body["payload"] = req.iis ? "iis" : "chart";
  }
  if (!v.pass())
    return violations_report(std::move(body), v);
  body["status"] = "pass";
  return {std::move(body), kOk};
}

Report run_atiyah_pair(const TaskRequest& req) {
  const point::LiePair pair{*req.lie_algebra, *req.subalgebra_q};
  Json body = {{"task", "atiyah-pair"}};
  ValidationReport v = point::validate_lie_algebra(pair.g);
  const auto closure = point::check_subalgebra(pair);
  v.violations.insert(v.violations.end(), closure.violations.begin(), closure.violations.end());
  if (!v.pass())
    return violations_report(std::move(body), v);
  const point::PairDecision d = point::atiyah_class_decide(pair);
  body.update(pair_decision_json(pair, d));
  body["status"] = "complete";
  return {std::move(body), kOk};
}

chart::FullConnection extension_of(const TaskRequest& req) {
  if (!req.connection)
    return chart::construct_extension_chart(*req.iis);
  const ExtensionReport ext = chart::is_chart_extension(*req.iis, *req.connection);
  if (!ext.holds)
    throw PreconditionError("connection is not an extension of the iis connection (" + ext.failed_condition + ")");
  return *req.connection;
}

Report run_atiyah_iis(const TaskRequest& req) {
  Json body = {{"task", "atiyah-iis"}};
  const ValidationReport v = chart::validate_iis_data(*req.iis);
  if (!v.pass())
    return violations_report(std::move(body), v);
  const chart::FullConnection conn = extension_of(req);
  const chart::IisForm omega = chart::atiyah_cocycle_iis(*req.iis, conn);
  if (!chart::d_iis(*req.iis, omega).is_zero())
    throw InternalError("Atiyah cocycle of valid iis data is not closed");
  const int bound = req.options.degree_bound.value_or(chart::default_primitive_degree(omega));
  const chart::PrimitiveResult prim = chart::primitive_search(*req.iis, omega, bound);
  body["cocycle"] = report::to_json(omega);
  body["degree_bound"] = bound;
  if (prim.found) {
    body["verdict"] = "vanishes";
    body["certificate"] = {{"primitive", report::to_json(prim.primitive)}};
    body["status"] = "complete";
    return {std::move(body), kOk};
  }
  body["verdict"] = "none_up_to_degree";
  body["status"] = "inconclusive";
  return {std::move(body), kInconclusive};
}

Report run_check_iis(const TaskRequest& req) {
  Json body = {{"task", "check-iis"}};
  const ValidationReport v = chart::validate_iis_data(*req.iis);
  if (!v.pass())
    return violations_report(std::move(body), v);
  const chart::IisCheck check =
      chart::check_iis(*req.iis, req.options.degree_bound.value_or(chart::kDefaultFrameDegree));
  if (!check.iis1_direct.empty() && check.iis1_direct != check.iis1)
    throw InternalError("iis1 decided differently on the flat frame and through iis1'");
  body.update(report::to_json(check));
  const bool fail = check.iis1 == "fail" || check.iis2 == "fail" || check.iis3 == "fail";
  const bool truncated = check.iis2 == "truncated" || check.iis3 == "truncated";
  body["status"] = fail ? "axiom_violation" : truncated ? "inconclusive" : "pass";
  return {std::move(body), fail ? kAxiomViolation : truncated ? kInconclusive : kOk};
}

Report run_rho_star_check(const TaskRequest& req) {
  Json body = {{"task", "rho-star-check"}};
  const chart::IisData& data = *req.iis;
  const ValidationReport v = chart::validate_iis_data(data);
  if (!v.pass())
    return violations_report(std::move(body), v);
  const chart::IisCheck check = chart::check_iis(data, req.options.degree_bound.value_or(chart::kDefaultFrameDegree));
  if (check.iis1 != "pass") {
    body["status"] = "not_applicable";
    body["reason"] = "iis1 fails, so the data is not an infinitesimal ideal system";
    return {std::move(body), kAxiomViolation};
  }
  const std::uint64_t seed = seed_of(req);
  sampling::Rng rng(seed);
  std::vector<chart::FullConnection> conns{extension_of(req)};
  for (int i = 0; i < kRandomExtensions; ++i)
    conns.push_back(sampling::random_chart_extension(rng, data));
  bool identity = true;
  for (const auto& conn : conns) {
    const chart::PairForm lhs = chart::rho_star(data.alg, data, chart::atiyah_cocycle_iis(data, conn));
    const chart::PairForm rhs = chart::pair_cocycle(data.alg, data.q, conn);
    identity = identity && lhs == rhs;
  }
  bool chain = true;
  int forms = 0;
  for (int degree = 0; degree <= 1; ++degree)
    for (int i = 0; i < kRandomForms; ++i, ++forms) {
      const chart::IisForm f = sampling::random_iis_form(rng, data, degree);
      chain = chain && chart::d_pair(data.alg, data.q, chart::rho_star(data.alg, data, f)) ==
                           chart::rho_star(data.alg, data, chart::d_iis(data, f));
    }
  const chart::PairForm image =
      chart::rho_star(data.alg, data, chart::atiyah_cocycle_iis(data, conns.front()));
  body["identity_holds"] = identity;
  body["chain_map_holds"] = chain;
  body["extensions_checked"] = conns.size();
  body["forms_checked"] = forms;
  body["seed"] = seed;
  body["pair_cocycle"] = report::to_json(image);
  body["status"] = identity && chain ? "pass" : "internal_error";
  return {std::move(body), identity && chain ? kOk : kInternalError};
}

Json fibration_json(const chart::FibrationResult& fib) {
  if (!fib.fibered) {
    Json idx = Json::array();
    for (std::size_t i : fib.witness_indices)
      idx.push_back(i + 1);
    return {{"verdict", "not_fibered"},
            {"witness", {{"condition", fib.witness_condition}, {"indices", idx}, {"polynomial", fib.witness_polynomial}}}};
  }
  return {{"verdict", "fibered"}, {"quotient", report::chart_section(fib.quotient)}};
}

Report run_fibration(const TaskRequest& req) {
  Json body = {{"task", "fibration"}};
  const ValidationReport v = chart::validate_chart_algebroid(*req.chart);
  if (!v.pass())
    return violations_report(std::move(body), v);
  const auto [p, q] = req.fibration ? *req.fibration : std::pair{req.iis->p, req.iis->q};
  const chart::FibrationResult fib = chart::make_coordinate_fibration(*req.chart, p, q);
  body.update(fibration_json(fib));
  body["p"] = p;
  body["q"] = q;
  if (fib.fibered) {
    if (!chart::atiyah_cocycle_iis(fib.nabla_phi, fib.projectable_conn).is_zero())
      throw InternalError("projectable connection has a nonzero Atiyah cocycle");
    body["projectable_cocycle_zero"] = true;
  }
  body["status"] = "complete";
  return {std::move(body), kOk};
}

Json point_entry_json(const catalog::CatalogEntry& e) {
  const point::PairDecision d = point::atiyah_class_decide(e.pair());
  Json computed = {{"naive_ideal", point::naive_ideal_check(e.pair()) ? "true" : "false"},
                   {"atiyah", d.vanishes ? "vanishes" : "nonzero"}};
  return {{"kind", "point"},
          {"expected", e.expected},
          {"computed", computed},
          {"matches", Json(e.expected) == computed},
          {"certificate", pair_certificate(d)},
          {"cocycle", report::to_json(d.cocycle)}};
}

Json chart_entry_json(const catalog::CatalogEntry& e) {
  const chart::IisData& data = e.iis();
  Json computed;
  Json out = {{"kind", "chart"}, {"expected", e.expected}};
  const ValidationReport v = chart::validate_iis_data(data);
  computed["validate"] = v.pass() ? "pass" : "fail";
  if (v.pass()) {
    const chart::IisCheck check = chart::check_iis(data);
    computed["iis1"] = check.iis1;
    computed["iis2"] = check.iis2;
    computed["iis3"] = check.iis3;
    out["check_iis"] = report::to_json(check);
    const chart::FibrationResult fib = chart::make_coordinate_fibration(data.alg, data.p, data.q);
    computed["fibration"] = fib.fibered ? "fibered" : "not_fibered";
    out["fibration"] = fibration_json(fib);
    const chart::FullConnection conn = chart::construct_extension_chart(data);
    const chart::IisForm omega = chart::atiyah_cocycle_iis(data, conn);
    computed["default_cocycle"] = omega.is_zero() ? "zero" : "nonzero";
    out["default_cocycle"] = report::to_json(omega);
    const chart::PrimitiveResult prim = chart::primitive_search(data, omega);
    out["default_primitive"] =
        prim.found ? Json{{"primitive", report::to_json(prim.primitive)}}
                   : Json{{"none_up_to_degree", prim.degree_bound}};
    if (check.iis1 == "pass")
      out["rho_star_identity"] =
          chart::rho_star(data.alg, data, omega) == chart::pair_cocycle(data.alg, data.q, conn);
  }
  out["computed"] = computed;
  out["matches"] = Json(e.expected) == computed;
  return out;
}

Json search_json(const catalog::SearchResult& s) {
  Json coeffs = Json::array();
  for (const auto& c : s.coeff_set)
    coeffs.push_back(to_string(c));
  Json out = {{"max_dim", s.max_dim},
              {"coeff_set", coeffs},
              {"candidates", s.candidates},
              {"lie_pairs", s.lie_pairs},
              {"found", s.entry.has_value()}};
  if (s.entry) {
    out["witness"] = {{"name", s.entry->name},
                      {"lie_algebra", report::lie_algebra_section(s.entry->pair().g)},
                      {"subalgebra", {{"q", s.entry->pair().q}}},
                      {"naive_ideal", point::naive_ideal_check(s.entry->pair())},
                      {"cocycle", report::to_json(s.decision->cocycle)},
                      {"certificate", pair_certificate(*s.decision)}};
  }
  return out;
}

}  // namespace

Json catalog_report() {
  Json entries = Json::object();
  bool all_match = true;
  for (const auto& e : catalog::all_entries()) {
    Json j = e.is_point() ? point_entry_json(e) : chart_entry_json(e);
    all_match = all_match && j["matches"].get<bool>();
    entries[e.name] = std::move(j);
  }
  Json search = Json::object();
  const std::vector<Rational> coeffs{Rational(-1), Rational(0), Rational(1)};
  for (std::size_t d : {2, 3, 4})
    search["max_dim_" + std::to_string(d)] = search_json(catalog::search_nonvanishing_pair(d, coeffs));
  return {{"task", "catalog"}, {"entries", entries}, {"search", search}, {"all_expected_match", all_match}};
}

Report run_task(const TaskRequest& request, const CatalogContext& catalog) {
  switch (request.task) {
    case Task::validate:
      return run_validate(request);
    case Task::atiyah_pair:
      return run_atiyah_pair(request);
    case Task::atiyah_iis:
      return run_atiyah_iis(request);
    case Task::check_iis:
      return run_check_iis(request);
    case Task::rho_star_check:
      return run_rho_star_check(request);
    case Task::fibration:
      return run_fibration(request);
    case Task::catalog:
      break;
  }
  Json body = catalog_report();
  const bool match = body["all_expected_match"].get<bool>();
  std::string golden = "skipped";
  if (!catalog.golden_path.empty()) {
    if (catalog.regenerate) {
      std::ofstream out(catalog.golden_path, std::ios::binary);
      if (!out)
        throw InputError("cannot write golden file " + catalog.golden_path);
      out << body.dump(2) << "\n";
      golden = "regenerated";
    } else {
      std::ifstream in(catalog.golden_path, std::ios::binary);
      if (!in) {
        golden = "missing";
      } else {
        Json stored;
        try {
          stored = Json::parse(in);
        } catch (const Json::parse_error&) {
          throw InputError("golden file " + catalog.golden_path + " is not valid JSON");
        }
        golden = stored == body ? "match" : "drift";
      }
    }
  } else if (catalog.regenerate) {
    throw InputError("--regen-golden needs a golden directory");
  }
  body["golden"] = golden;
  const bool ok = match && golden != "drift";
  body["status"] = ok ? "pass" : "fail";
  return {std::move(body), ok ? kOk : kInternalError};
}

std::string emit_report(const Report& r, report::Format format) { return report::emit(r.body, format); }

// --- command line ------------------------------------------------------------------

int run_cli(int argc, char** argv) {
  CLI::App app{"Exact Atiyah-class computations for Lie pairs and infinitesimal ideal systems"};
  std::string task_text;
  std::string input_path;
  std::string format_text;
  int degree_bound = -1;
  bool regen = false;
  std::string golden_dir = ATIYAH_LAB_GOLDEN_DIR;
  std::string dump_dir;
  std::vector<std::string> task_choices;
  for (const auto& [t, name] : kTaskNames)
    task_choices.emplace_back(name);
  app.add_option("--task", task_text, "Task to run")->check(CLI::IsMember(task_choices));
  app.add_option("--input", input_path, "Problem file (JSON)");
  app.add_option("--format", format_text, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--degree-bound", degree_bound, "Polynomial degree bound")->check(CLI::Range(0, 64));
  app.add_flag("--regen-golden", regen, "Rewrite the catalog golden file (catalog task only)");
  app.add_option("--golden-dir", golden_dir, "Directory holding catalog.json");
  app.add_option("--dump-catalog", dump_dir, "Write one input file per catalog entry into DIR and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  if (!dump_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dump_dir, ec);
    for (const auto& e : catalog::all_entries()) {
      std::ofstream out(std::filesystem::path(dump_dir) / (e.name + ".json"), std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write into " << dump_dir << "\n";
        return kInputError;
      }
      out << report::entry_document(e).dump(2) << "\n";
    }
    return kOk;
  }
  if (task_text.empty()) {
    std::cerr << "error: --task is required\n";
    return kInputError;
  }
  const Task task = *parse_task(task_text);
  if (regen && task != Task::catalog) {
    std::cerr << "error: --regen-golden only applies to --task catalog\n";
    return kInputError;
  }

  report::Format format = report::Format::json;
  if (format_text == "text")
    format = report::Format::text;
  auto fail = [&](const std::string& status, const std::string& message, int code) {
    std::cerr << "error: " << message << "\n";
    std::cout << report::emit(Json{{"task", task_text}, {"status", status}, {"error", message}}, format);
    return code;
  };

  try {
    std::string text;
    if (!input_path.empty()) {
      std::ifstream in(input_path, std::ios::binary);
      if (!in)
        return fail("input_error", "cannot read " + input_path, kInputError);
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    } else if (task != Task::catalog) {
      return fail("input_error", "--input is required for task " + task_text, kInputError);
    }
    TaskRequest req = parse_input(text, task);
    if (degree_bound >= 0)
      req.options.degree_bound = degree_bound;
    if (format_text.empty() && req.options.format)
      format = *req.options.format;
    CatalogContext ctx;
    if (task == Task::catalog && !golden_dir.empty())
      ctx.golden_path = (std::filesystem::path(golden_dir) / "catalog.json").string();
    ctx.regenerate = regen;
    const Report r = run_task(req, ctx);
    std::cout << emit_report(r, format);
    return r.exit_code;
  } catch (const InputError& e) {
    return fail("input_error", e.what(), kInputError);
  } catch (const InternalError& e) {
    return fail("internal_error", e.what(), kInternalError);
  } catch (const std::exception& e) {
    return fail("internal_error", e.what(), kInternalError);
  }
}

}  // namespace alab::cli
