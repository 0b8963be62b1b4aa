#pragma once

#include <string>
#include <vector>

namespace maxclaim {

/// Outcome of a grid-based numeric check of one analytic condition.
///
/// `worst_violation` is the largest amount by which the condition failed on
/// the grid (0 when it held everywhere) and `witness` is the grid point where
/// that happened. `passed` is `worst_violation <= tolerance`.
struct ConditionReport {
  std::string name;
  bool passed = true;
  double worst_violation = 0.0;
  double tolerance = 0.0;
  std::vector<double> witness;
  std::string grid;

  /// Folds one observed violation into the report.
  void observe(double violation, std::vector<double> at) {
    if (violation > worst_violation) {
      worst_violation = violation;
      witness = std::move(at);
    }
    passed = worst_violation <= tolerance;
  }
};

inline ConditionReport boolean_report(std::string name, bool ok, double violation,
                                      std::vector<double> witness = {},
                                      std::string grid = "exact") {
  ConditionReport r;
  r.name = std::move(name);
  r.passed = ok;
  r.worst_violation = ok ? 0.0 : violation;
  r.witness = ok ? std::vector<double>{} : std::move(witness);
  r.grid = std::move(grid);
  return r;
}

}  // namespace maxclaim
