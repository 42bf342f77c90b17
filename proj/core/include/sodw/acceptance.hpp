#pragma once

// Acceptance suite: one self-contained check per reproduced result, each
// with a wall-clock budget. Shared by the `verify` CLI verb and ctest.

#include <functional>
#include <string>
#include <vector>

namespace sodw {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  /// Returns the pass flag; appends human-readable findings to `detail`.
  std::function<bool(std::string& detail)> check;
};

const std::vector<Criterion>& acceptance_criteria();

/// Runs one criterion, timing it. A thrown exception counts as a failure
/// and so does exceeding the budget.
CriterionResult run_criterion(const Criterion& c);

std::vector<CriterionResult> run_acceptance();

/// "[PASS] 01 name (0.012 s) detail"
std::string format_result(const CriterionResult& r);

}  // namespace sodw
