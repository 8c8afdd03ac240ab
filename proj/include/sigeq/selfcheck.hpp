#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sigeq {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Internal consistency battery run by the `check` command: objective scale
/// invariance, full-memory vs memoryless solver agreement, the two-stage
/// closed-form constant-offset identity, and last-stage purity of dynamic
/// optima. Deterministic for a fixed seed.
std::vector<CheckResult> run_self_checks(std::uint64_t seed = 7, unsigned threads = 1);

}  // namespace sigeq
