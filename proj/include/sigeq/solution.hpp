#pragma once

#include <vector>

#include "sigeq/policy.hpp"

namespace sigeq {

struct SolverDiagnostics {
  int starts = 0;
  int converged_starts = 0;
  double best_objective = 0.0;  // raw optimizer minimum, pre-canonicalization
  double spread = 0.0;          // terminal-value spread across converged starts
  bool suspect_landscape = false;
};

/// Canonicalized optimal sender policy with its best-response receiver and
/// exact costs (evaluated at the canonical policy).
struct EquilibriumSolution {
  SenderPolicy policy;
  ReceiverPolicy receiver;
  double total_cost = 0.0;
  std::vector<double> stage_costs;
  SolverDiagnostics diagnostics;
};

}  // namespace sigeq
