#pragma once

#include <string>
#include <vector>

namespace fracstab {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AStarRowReport {
  double alpha = 0.0;
  double beta = 0.0;
  double expected = 0.0;
  double computed = 0.0;
  bool agree = false;
};

struct ReferenceReport {
  std::vector<CheckResult> checks;
  std::vector<AStarRowReport> a_star;

  bool all_passed() const;
};

/// Runs the published reference cases: bifurcation values, real intervals,
/// the complex-b table, the simulated examples of both families, and
/// optionally the a* table (the slow part).
ReferenceReport run_reference_checks(unsigned jobs, bool include_a_star = true);

}  // namespace fracstab
