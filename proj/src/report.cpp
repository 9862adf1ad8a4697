#include "atiyah_lab/report.hpp"

namespace alab::report {

namespace {

Json slot_indices(int degree, std::size_t s, std::size_t width) {
  Json out = Json::array();
  if (degree == 1)
    out.push_back(s + 1);
  if (degree == 2) {
    out.push_back(s / width + 1);
    out.push_back(s % width + 1);
  }
  return out;
}

}  // namespace

Json to_json(const Rational& r) { return to_string(r); }
Json to_json(const Poly& p) { return p.to_string(); }

Json to_json(const QVector& v) {
  Json out = Json::array();
  for (const auto& x : v)
    out.push_back(to_string(x));
  return out;
}

Json to_json(const ValidationReport& r) {
  Json out = Json::array();
  for (const auto& v : r.violations) {
    Json idx = Json::array();
    for (std::size_t i : v.indices)
      idx.push_back(i + 1);
    out.push_back({{"kind", v.kind}, {"indices", idx}, {"detail", v.detail}});
  }
  return out;
}

Json to_json(const point::CEForm& f) {
  Json out = Json::array();
  for (std::size_t s = 0; s < f.slots.size(); ++s)
    for (std::size_t a1 = 0; a1 < f.m; ++a1)
      for (std::size_t a2 = 0; a2 < f.m; ++a2)
        for (std::size_t c = 0; c < f.m; ++c) {
          const Rational& v = f.slots[s](a1, a2, c);
          if (v != 0)
            out.push_back({{"j", slot_indices(f.degree, s, f.q)},
                           {"a1", f.q + a1 + 1},
                           {"a2", f.q + a2 + 1},
                           {"c", f.q + c + 1},
                           {"value", to_string(v)}});
        }
  return out;
}

Json to_json(const chart::IisForm& f) {
  Json out = Json::array();
  for (std::size_t s = 0; s < f.slots.size(); ++s)
    for (std::size_t t = 0; t < f.slots[s].size(); ++t) {
      const PolyMatrix& mat = f.slots[s][t];
      for (std::size_t i = 0; i < mat.rows(); ++i)
        for (std::size_t j = 0; j < mat.cols(); ++j)
          if (!mat(i, j).is_zero())
            out.push_back({{"mu", slot_indices(f.degree, s, f.p)},
                           {"nu", f.p + t + 1},
                           {"row", i + 1},
                           {"col", j + 1},
                           {"value", mat(i, j).to_string()}});
    }
  return out;
}

Json to_json(const chart::PairForm& f) {
  Json out = Json::array();
  for (std::size_t s = 0; s < f.slots.size(); ++s)
    for (std::size_t a1 = 0; a1 < f.m; ++a1)
      for (std::size_t a2 = 0; a2 < f.m; ++a2)
        for (std::size_t c = 0; c < f.m; ++c) {
          const Poly& v = f.slots[s](a1, a2, c);
          if (!v.is_zero())
            out.push_back({{"j", slot_indices(f.degree, s, f.q)},
                           {"a1", f.q + a1 + 1},
                           {"a2", f.q + a2 + 1},
                           {"c", f.q + c + 1},
                           {"value", v.to_string()}});
        }
  return out;
}

Json to_json(const PolyMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back(m(i, j).to_string());
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const chart::IisCheck& c) {
  Json out = {{"iis1", c.iis1},
              {"iis2", c.iis2},
              {"iis3", c.iis3},
              {"frame_verified", c.frame_verified},
              {"rho_J_spans_F_M", c.rho_j_spans_fm},
              {"witnesses", c.witnesses}};
  if (!c.iis1_direct.empty())
    out["iis1_direct"] = c.iis1_direct;
  if (!c.frame_verified)
    out["degree_bound"] = c.degree_bound;
  return out;
}

Json lie_algebra_section(const point::LieAlgebra& g) {
  Json brackets = Json::array();
  for (std::size_t i = 0; i < g.dim; ++i)
    for (std::size_t j = i + 1; j < g.dim; ++j) {
      Json coeffs = Json::array();
      for (std::size_t k = 0; k < g.dim; ++k)
        if (g.c(i, j, k) != 0)
          coeffs.push_back(Json::array({k + 1, to_string(g.c(i, j, k))}));
      if (!coeffs.empty())
        brackets.push_back({{"i", i + 1}, {"j", j + 1}, {"coeffs", coeffs}});
    }
  return {{"dim", g.dim}, {"brackets", brackets}};
}

Json chart_section(const chart::Algebroid& alg) {
  Json structfn = Json::array();
  for (std::size_t i = 0; i < alg.rank; ++i)
    for (std::size_t j = i + 1; j < alg.rank; ++j) {
      Json coeffs = Json::array();
      for (std::size_t k = 0; k < alg.rank; ++k)
        if (!alg.structfn(i, j, k).is_zero())
          coeffs.push_back(Json::array({k + 1, alg.structfn(i, j, k).to_string()}));
      if (!coeffs.empty())
        structfn.push_back({{"i", i + 1}, {"j", j + 1}, {"coeffs", coeffs}});
    }
  return {{"nvars", alg.nvars}, {"rank", alg.rank}, {"anchor", to_json(alg.anchor)}, {"structfn", structfn}};
}

Json iis_section(const chart::IisData& data) {
  Json christoffel = Json::array();
  for (const auto& g : data.christoffel)
    christoffel.push_back(to_json(g));
  Json out = {{"p", data.p}, {"q", data.q}, {"christoffel", christoffel}};
  if (data.flat_frame)
    out["flat_frame"] = to_json(*data.flat_frame);
  return out;
}

Json entry_document(const catalog::CatalogEntry& entry) {
  if (entry.is_point())
    return {{"lie_algebra", lie_algebra_section(entry.pair().g)}, {"subalgebra", {{"q", entry.pair().q}}}};
  return {{"chart", chart_section(entry.iis().alg)}, {"iis", iis_section(entry.iis())}};
}

namespace {

void flatten(const Json& value, const std::string& path, std::string& out) {
  if (value.is_object() && !value.empty()) {
    for (auto it = value.begin(); it != value.end(); ++it)
      flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    return;
  }
  if (value.is_array() && !value.empty()) {
    std::size_t i = 0;
    for (const auto& v : value)
      flatten(v, path + "[" + std::to_string(i++) + "]", out);
    return;
  }
  out += path;
  out += ": ";
  out += value.is_string() ? value.get<std::string>() : value.dump();
  out += '\n';
}

}  // namespace

std::string emit(const Json& report, Format format) {
  if (format == Format::json)
    return report.dump() + "\n";
  std::string out;
  flatten(report, "", out);
  return out;
}

}  // namespace alab::report
