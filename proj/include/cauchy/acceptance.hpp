#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace cauchy {

/// Outcome of one acceptance criterion.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Measured quantities behind the verdict.
  std::string detail;
  double seconds = 0.0;
  /// Wall-clock budget; 0 when the criterion has none.
  double budget_seconds = 0.0;
};

using CriterionCallback = std::function<void(const CriterionResult&)>;

/// Runs criteria 1 to 11 in order; `on_result` sees each one as it finishes.
/// Criteria 6 to 9 reuse the instances of criteria 4 and 5.
std::vector<CriterionResult> run_acceptance(const CriterionCallback& on_result = {});

/// `[PASS] 4 name (1.234 s) detail`
std::string format_result(const CriterionResult& r);

}  // namespace cauchy
