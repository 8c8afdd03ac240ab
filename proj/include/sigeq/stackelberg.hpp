#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sigeq/config.hpp"
#include "sigeq/gauss.hpp"
#include "sigeq/optimize.hpp"
#include "sigeq/policy.hpp"
#include "sigeq/solution.hpp"

namespace sigeq {

// ---------------------------------------------------------------------------
// Static (single-stage) solution
// ---------------------------------------------------------------------------

struct StaticSolution {
  double b = 1.0;
  double c = 0.0;
  double d = 0.0;
  double cost = 0.0;
};

/// Closed-form single-stage optimum:
///   b* = 1, d* = 0,
///   c* = (-sigma_x2 + sigma_x·sqrt(sigma_x2 + 4(sigma_theta2 + rho)))
///        / (2(sigma_theta2 + rho)),
/// with the analytic limit c* = 1 as sigma_theta2 + rho -> 0. Always
/// 0 < c* <= 1. Throws std::invalid_argument when sigma_theta2 + rho < 0.
StaticSolution solve_static(double sigma_x2, double sigma_theta2, double rho = 0.0);

// ---------------------------------------------------------------------------
// Whitened second-moment recursion (memoryless policies)
// ---------------------------------------------------------------------------

/// Second moments of the state and bias after subtracting their projections
/// onto all past signals. The per-stage signal in this frame is
/// b·x~ + c·theta~ + d·nu with nu standard normal.
struct WhitenedMoments {
  double var_x = 0.0;
  double var_theta = 0.0;
  double cov = 0.0;
};

/// Moments entering stage `upto` (0-based) given the memoryless policies of
/// stages 0..upto-1: rank-one posterior update per observed signal, then
/// AR propagation.
WhitenedMoments propagate_whitened_moments(const GameConfig& config,
                                           const std::vector<StagePolicy>& stages, int upto);

/// Exact sender cost under best response for a memoryless policy; equals
/// stackelberg_objective on the diagonal embedding. Authoritative evaluator.
double memoryless_objective(const GameConfig& config, const std::vector<StagePolicy>& stages);

/// Same quantity via the whitened-moment recursion; cross-check path only.
double memoryless_objective_whitened(const GameConfig& config,
                                     const std::vector<StagePolicy>& stages);

// ---------------------------------------------------------------------------
// Two-stage closed form
// ---------------------------------------------------------------------------

/// Pieces of the closed-form two-stage objective. phi_x/phi_theta are the
/// signal-state and signal-bias correlations E{x~ y~} and E{theta~ y~} for
/// the two stages (independent of the noise weights d); delta couples the
/// stages and vanishes exactly when the stage problems separate.
struct TwoStageTerms {
  std::array<double, 2> phi_x{};      // [first stage, last stage]
  std::array<double, 2> phi_theta{};
  double delta = 0.0;
  double term_first = 0.0;     // information value extracted at stage n-1
  double term_last = 0.0;      // information value extracted at stage n alone
  double term_coupling = 0.0;  // cross-stage interaction, <= 0 at last-stage optima
  double residual_signal_power = 0.0;  // E{(b x̆ + c thetă)^2}, must be >= 0
  double whitened_signal_power = 0.0;  // E{(b x~ + c theta~)^2}, must be >= 0
  double objective = 0.0;              // term_first + term_last + term_coupling
};

/// Evaluates the closed-form maximization objective for the last two stages
/// given the whitened moments entering stage n-1. Requires d_last = 0 and
/// nondegenerate signals at both stages; refuses (std::domain_error) instead
/// of regularizing a zero-variance signal. The identity
///   direct two-stage cost + objective = const (independent of parameters)
/// is what the consistency battery checks.
TwoStageTerms eval_two_stage_closed_form(const GameConfig& config, const StagePolicy& first,
                                         const StagePolicy& last,
                                         const WhitenedMoments& prior);

// ---------------------------------------------------------------------------
// Dynamic solver
// ---------------------------------------------------------------------------

enum class SolveMode { full_memory, memoryless };

SolveMode parse_solve_mode(const std::string& name);  // "full" | "memoryless"
std::string to_string(SolveMode mode);

struct DynamicSolveOptions {
  SolveMode mode = SolveMode::memoryless;
  bool constrain_d_zero = false;
  int starts = 64;
  std::uint64_t seed = 1;
  double ftol = 1e-12;
  double xtol = 1e-9;
  int max_iters = 0;  // 0: auto
  unsigned threads = 1;
};

/// Multi-start minimization of stackelberg_objective over the chosen
/// parameterization (box [-3,3] per b,c and [0,3] per d; warm starts at the
/// repeated static solution and the all-reveal policy). The returned policy
/// is canonical and the costs are evaluated at it.
EquilibriumSolution solve_dynamic(const GameConfig& config, const DynamicSolveOptions& options);

// ---------------------------------------------------------------------------
// Pure-vs-mixed dichotomy sweep
// ---------------------------------------------------------------------------

struct SweepRow {
  double a_x = 0.0;
  double a_theta = 0.0;
  double d1_abs = 0.0;              // canonical first-stage noise weight
  double cost_unconstrained = 0.0;
  double cost_d0 = 0.0;             // optimum over pure (d = 0) policies
  double gap = 0.0;                 // cost_d0 - cost_unconstrained
  double separability_residual = 0.0;  // a_x·b_2·c_1 - a_theta·b_1·c_2 at the pure optimum
  bool solver_ok = true;
  std::string note;
};

/// Grid sweep over AR coefficients classifying where noiseless policies are
/// optimal. Rows are emitted row-major: a_x outer, a_theta inner. All grid
/// values must lie in (-1, 1); per-point solver failures are recorded in the
/// row and the sweep continues.
std::vector<SweepRow> dichotomy_sweep(const std::vector<double>& a_x_grid,
                                      const std::vector<double>& a_theta_grid,
                                      const GameConfig& base, const DynamicSolveOptions& options,
                                      unsigned grid_threads = 1);

}  // namespace sigeq
