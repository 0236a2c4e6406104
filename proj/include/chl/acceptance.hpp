#pragma once

#include <string>
#include <vector>

namespace chl {

// One line of the acceptance report: a numbered check with its verdict,
// wall-clock runtime, and a short measurement summary.
struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

// Runs one acceptance criterion (1..8); throws std::invalid_argument for an
// unknown index.
CriterionResult run_criterion(int index);

// Runs all eight criteria in order.
std::vector<CriterionResult> run_all_criteria();

}  // namespace chl
