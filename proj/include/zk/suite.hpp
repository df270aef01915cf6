#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace zk {

/// Outcome of one acceptance criterion. pass already includes the runtime limit.
struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  double limit_seconds = 0.0;
  std::string detail;  // measured values against their tolerances, no timings
};

constexpr int kCriterionCount = 9;

/// Runs criterion id (1..9). Progress notes go to log when given.
CriterionResult run_criterion(int id, std::ostream* log = nullptr);

/// One line: "[PASS] C5 linear cross-oracle: rel_L2(x>=2dx)=6.3e-06 (<= 0.01); ...".
std::string format_result(const CriterionResult& r);

}  // namespace zk
