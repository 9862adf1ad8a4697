#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "atiyah_lab/catalog.hpp"
#include "atiyah_lab/cli.hpp"
#include "atiyah_lab/errors.hpp"
#include "atiyah_lab/linsolve.hpp"
#include "atiyah_lab/report.hpp"

namespace py = pybind11;
using namespace alab;

namespace {

// Rationals cross the boundary as canonical "p/q" strings.
QVector to_qvector(const std::vector<std::string>& v) {
  QVector out;
  for (const auto& s : v)
    out.push_back(parse_rational(s));
  return out;
}

std::vector<std::string> from_qvector(const QVector& v) {
  std::vector<std::string> out;
  for (const auto& x : v)
    out.push_back(to_string(x));
  return out;
}

QMatrix to_qmatrix(const std::vector<std::vector<std::string>>& rows) {
  const std::size_t nc = rows.empty() ? 0 : rows[0].size();
  QMatrix m(rows.size(), nc, Rational(0));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != nc)
      throw InputError("ragged matrix");
    for (std::size_t j = 0; j < nc; ++j)
      m(i, j) = parse_rational(rows[i][j]);
  }
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact Atiyah-class computations";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

  py::class_<Poly>(m, "Poly")
      .def(py::init([](const std::string& text, std::size_t nvars) { return Poly::parse(text, nvars); }),
           py::arg("text"), py::arg("nvars"))
      .def_property_readonly("nvars", &Poly::nvars)
      .def("degree", &Poly::degree)
      .def("is_zero", &Poly::is_zero)
      .def("diff", [](const Poly& p, std::size_t var) { return poly_diff(p, var); }, py::arg("var"),
           "Partial derivative in the 0-based variable `var`.")
      .def("__add__", &poly_add)
      .def("__sub__", &poly_sub)
      .def("__mul__", &poly_mul)
      .def("__neg__", [](const Poly& p) { return -p; })
      .def("__eq__", [](const Poly& a, const Poly& b) { return a == b; })
      .def("__str__", &Poly::to_string)
      .def("__repr__", [](const Poly& p) { return "Poly('" + p.to_string() + "', " + std::to_string(p.nvars()) + ")"; });

  m.def(
      "linear_solve",
      [](const std::vector<std::vector<std::string>>& a, const std::vector<std::string>& b) {
        const SolveResult r = linear_solve(to_qmatrix(a), to_qvector(b));
        py::dict out;
        out["solvable"] = r.solvable;
        if (r.solvable)
          out["solution"] = from_qvector(r.solution);
        else
          out["certificate"] = from_qvector(r.certificate);
        return out;
      },
      py::arg("a"), py::arg("b"), "Exact solve of A x = b with rationals given as strings.");

  m.def(
      "kernel_basis",
      [](const std::vector<std::vector<std::string>>& a) {
        std::vector<std::vector<std::string>> out;
        for (const auto& v : kernel_basis(to_qmatrix(a)))
          out.push_back(from_qvector(v));
        return out;
      },
      py::arg("a"));

  m.def(
      "run_task",
      [](const std::string& task, const std::string& input, std::optional<int> degree_bound) {
        const auto t = cli::parse_task(task);
        if (!t)
          throw InputError("unknown task '" + task + "'");
        cli::TaskRequest req = cli::parse_input(input, *t);
        if (degree_bound)
          req.options.degree_bound = degree_bound;
        const cli::Report r = cli::run_task(req);
        return py::make_tuple(r.exit_code, r.body.dump());
      },
      py::arg("task"), py::arg("input"), py::arg("degree_bound") = py::none(),
      "Runs one task on a JSON document; returns (exit_code, report_json).");

  m.def("catalog_names", [] {
    std::vector<std::string> out;
    for (const auto& e : catalog::all_entries())
      out.push_back(e.name);
    return out;
  });

  m.def(
      "catalog_input",
      [](const std::string& name) {
        const auto e = catalog::find_entry(name);
        if (!e)
          throw InputError("no catalog entry named '" + name + "'");
        return report::entry_document(*e).dump();
      },
      py::arg("name"), "The input document of a catalog entry.");

  m.def(
      "search_nonvanishing_pair",
      [](std::size_t max_dim, const std::vector<std::string>& coeffs) -> std::optional<std::string> {
        const auto r = catalog::search_nonvanishing_pair(max_dim, to_qvector(coeffs));
        if (!r.entry)
          return std::nullopt;
        return report::entry_document(*r.entry).dump();
      },
      py::arg("max_dim"), py::arg("coeffs"),
      "Input document of the first pair with nonvanishing class, or None.");
}
