#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qpc {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast seeded invariants across all modules (a few seconds in total).
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed = 1);

}  // namespace qpc
