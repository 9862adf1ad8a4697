#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "atiyah_lab/chart.hpp"
#include "atiyah_lab/point.hpp"
#include "atiyah_lab/report.hpp"

namespace alab::cli {

enum class Task { validate, atiyah_pair, atiyah_iis, check_iis, rho_star_check, fibration, catalog };

std::optional<Task> parse_task(std::string_view name);
std::string task_name(Task task);

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kAxiomViolation = 2,
  kInconclusive = 3,
  kInternalError = 4,
};

struct Options {
  std::optional<int> degree_bound;
  std::optional<report::Format> format;
  std::optional<std::uint64_t> seed;
};

struct TaskRequest {
  Task task = Task::validate;
  std::optional<point::LieAlgebra> lie_algebra;
  std::optional<std::size_t> subalgebra_q;
  std::optional<chart::Algebroid> chart;
  std::optional<chart::IisData> iis;
  std::optional<chart::FullConnection> connection;
  std::optional<std::pair<std::size_t, std::size_t>> fibration;  ///< (p, q)
  Options options;
};

/// Parses and validates an input document. Throws SyntaxError (with a
/// character position) or SchemaError (with the offending field path).
/// An empty document is accepted for the catalog task.
TaskRequest parse_input(std::string_view text, Task task);

struct Report {
  report::Json body;
  int exit_code = kOk;
};

struct CatalogContext {
  std::string golden_path;  ///< empty: skip the golden comparison
  bool regenerate = false;
};

/// The catalog report body without golden-file bookkeeping.
report::Json catalog_report();

Report run_task(const TaskRequest& request, const CatalogContext& catalog = {});

std::string emit_report(const Report& report, report::Format format);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace alab::cli
