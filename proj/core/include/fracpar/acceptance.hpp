#pragma once

#include <string>
#include <vector>

namespace fracpar {

// Outcome of one gate criterion: a hard pass/fail verdict plus the measured
// quantities that justify it, so a failing run is diagnosable from the
// summary alone.
struct CriterionResult {
  int number = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // key metrics, "metric=value (tol ...)" style
  double seconds = 0.0;
};

struct AcceptanceSummary {
  std::vector<CriterionResult> results;

  bool all_passed() const;
  double total_seconds() const;
};

// Runs the acceptance gate.  Every criterion is self-contained (it builds its
// own grids, operators, and data deterministically), so any subset can be run
// in isolation; `only` selects criterion numbers, empty means all.  Criteria
// never throw out of this call: an escaping exception is converted into a
// failed result carrying the exception text.
AcceptanceSummary run_acceptance(const std::vector<int>& only = {});

// One row per criterion: number,name,passed,detail (detail quoted).  Timing
// stays out of the CSV so identical runs produce byte-identical files.
std::string acceptance_csv(const AcceptanceSummary& summary);

}  // namespace fracpar
