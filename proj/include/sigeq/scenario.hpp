#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigeq/config.hpp"
#include "sigeq/nash.hpp"
#include "sigeq/sim.hpp"
#include "sigeq/solution.hpp"
#include "sigeq/stackelberg.hpp"

namespace sigeq {

using Json = nlohmann::ordered_json;

struct SolverSettings {
  std::string mode = "memoryless";  // "full" | "memoryless"
  int starts = 64;
  int max_iters = 0;
  double xtol = 1e-9;
  double ftol = 1e-12;
  std::uint64_t seed = 1;
  bool constrain_d_zero = false;
};

struct SweepSettings {
  std::vector<double> a_x_grid;
  std::vector<double> a_theta_grid;
};

struct SimSettings {
  long long samples = 100000;
  std::uint64_t seed = 1;
};

struct NashSettings {
  int iterations = 20;
};

struct OutputSettings {
  std::string format;  // "json" | "csv"; empty: per-command default
  std::string path;    // empty: stdout
};

struct Scenario {
  GameConfig game;
  SolverSettings solver;
  std::optional<SweepSettings> sweep;
  SimSettings sim;
  NashSettings nash;
  OutputSettings output;
};

/// Built-in defaults used when no scenario file is given.
Scenario default_scenario();

/// Parses a scenario document, rejecting unknown keys with a field-path
/// message (std::invalid_argument). Values that are absent keep defaults.
Scenario scenario_from_json(const Json& doc);
Json scenario_to_json(const Scenario& scenario);

DynamicSolveOptions solve_options_from(const Scenario& scenario, unsigned threads);

// --- result serialization --------------------------------------------------

Json static_solution_to_json(const StaticSolution& sol);
Json equilibrium_to_json(const EquilibriumSolution& sol);
EquilibriumSolution equilibrium_from_json(const Json& doc);

Json sweep_to_json(const std::vector<SweepRow>& rows);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

Json trajectory_to_json(const BrTrajectory& traj);
std::string trajectory_to_csv(const BrTrajectory& traj);

Json sim_report_to_json(const SimReport& report);

/// Fixed-width decimal with 9 significant digits ("%.9g"), used by every
/// CSV writer so tabular output is byte-stable.
std::string format_sig9(double value);

}  // namespace sigeq
