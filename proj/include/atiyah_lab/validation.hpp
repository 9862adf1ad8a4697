#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace alab {

struct Violation {
  std::string kind;                  ///< "antisymmetry", "jacobi", "closure", ...
  std::vector<std::size_t> indices;  ///< 0-based
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool pass() const { return violations.empty(); }
};

/// Outcome of an extension-property check; `indices` locate the first failure.
struct ExtensionReport {
  bool holds = true;
  std::string failed_condition;
  std::vector<std::size_t> indices;
};

}  // namespace alab
