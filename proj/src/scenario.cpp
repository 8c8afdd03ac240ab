#include "sigeq/scenario.hpp"

#include <cstdio>
#include <stdexcept>

namespace sigeq {

namespace {

void reject_unknown_keys(const Json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw std::invalid_argument(path + ": expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known) throw std::invalid_argument(path + ": unknown key '" + item.key() + "'");
  }
}

template <typename T>
void read_field(const Json& obj, const char* key, const std::string& path, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const Json::exception&) {
    throw std::invalid_argument(path + "." + key + ": wrong type");
  }
}

void read_optional(const Json& obj, const char* key, const std::string& path,
                   std::optional<double>& out) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  try {
    out = obj.at(key).get<double>();
  } catch (const Json::exception&) {
    throw std::invalid_argument(path + "." + key + ": wrong type");
  }
}

std::vector<std::vector<double>> triangular_from_json(const Json& arr, const std::string& path) {
  if (!arr.is_array()) throw std::invalid_argument(path + ": expected an array of arrays");
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const Json& row = arr[k];
    if (!row.is_array() || row.size() != k + 1)
      throw std::invalid_argument(path + ": row " + std::to_string(k) + " must have " +
                                  std::to_string(k + 1) + " entries");
    rows.push_back(row.get<std::vector<double>>());
  }
  return rows;
}

}  // namespace

Scenario default_scenario() {
  Scenario s;
  s.game.horizon = 2;
  s.game.a_x = 0.5;
  s.game.a_theta = 0.2;
  s.game.sigma_x2 = 1.0;
  s.game.sigma_theta2 = 1.0;
  s.game.rho = 0.0;
  s.game.stationary = true;
  return s;
}

Scenario scenario_from_json(const Json& doc) {
  reject_unknown_keys(doc, "scenario", {"game", "solver", "sweep", "sim", "nash", "output"});
  Scenario s = default_scenario();

  if (doc.contains("game")) {
    const Json& g = doc.at("game");
    reject_unknown_keys(g, "scenario.game",
                        {"horizon", "a_x", "a_theta", "sigma_x2", "sigma_theta2", "rho",
                         "sigma_w2", "sigma_v2", "stationary"});
    GameConfig raw;  // start from neutral defaults, not the built-in demo game
    read_field(g, "horizon", "scenario.game", raw.horizon);
    read_field(g, "a_x", "scenario.game", raw.a_x);
    read_field(g, "a_theta", "scenario.game", raw.a_theta);
    read_field(g, "sigma_x2", "scenario.game", raw.sigma_x2);
    read_field(g, "sigma_theta2", "scenario.game", raw.sigma_theta2);
    read_field(g, "rho", "scenario.game", raw.rho);
    read_optional(g, "sigma_w2", "scenario.game", raw.sigma_w2);
    read_optional(g, "sigma_v2", "scenario.game", raw.sigma_v2);
    read_field(g, "stationary", "scenario.game", raw.stationary);
    s.game = raw;
  }

  if (doc.contains("solver")) {
    const Json& v = doc.at("solver");
    reject_unknown_keys(v, "scenario.solver",
                        {"mode", "starts", "max_iters", "xtol", "ftol", "seed",
                         "constrain_d_zero"});
    read_field(v, "mode", "scenario.solver", s.solver.mode);
    read_field(v, "starts", "scenario.solver", s.solver.starts);
    read_field(v, "max_iters", "scenario.solver", s.solver.max_iters);
    read_field(v, "xtol", "scenario.solver", s.solver.xtol);
    read_field(v, "ftol", "scenario.solver", s.solver.ftol);
    read_field(v, "seed", "scenario.solver", s.solver.seed);
    read_field(v, "constrain_d_zero", "scenario.solver", s.solver.constrain_d_zero);
    parse_solve_mode(s.solver.mode);  // validate early
    if (s.solver.starts < 1) throw std::invalid_argument("scenario.solver.starts: must be >= 1");
  }

  if (doc.contains("sweep")) {
    const Json& w = doc.at("sweep");
    reject_unknown_keys(w, "scenario.sweep", {"a_x_grid", "a_theta_grid"});
    SweepSettings sweep;
    read_field(w, "a_x_grid", "scenario.sweep", sweep.a_x_grid);
    read_field(w, "a_theta_grid", "scenario.sweep", sweep.a_theta_grid);
    if (sweep.a_x_grid.empty() || sweep.a_theta_grid.empty())
      throw std::invalid_argument("scenario.sweep: grids must be non-empty");
    s.sweep = sweep;
  }

  if (doc.contains("sim")) {
    const Json& m = doc.at("sim");
    reject_unknown_keys(m, "scenario.sim", {"samples", "seed"});
    read_field(m, "samples", "scenario.sim", s.sim.samples);
    read_field(m, "seed", "scenario.sim", s.sim.seed);
    if (s.sim.samples < 1) throw std::invalid_argument("scenario.sim.samples: must be >= 1");
  }

  if (doc.contains("nash")) {
    const Json& nj = doc.at("nash");
    reject_unknown_keys(nj, "scenario.nash", {"iterations"});
    read_field(nj, "iterations", "scenario.nash", s.nash.iterations);
    if (s.nash.iterations < 1)
      throw std::invalid_argument("scenario.nash.iterations: must be >= 1");
  }

  if (doc.contains("output")) {
    const Json& o = doc.at("output");
    reject_unknown_keys(o, "scenario.output", {"format", "path"});
    read_field(o, "format", "scenario.output", s.output.format);
    read_field(o, "path", "scenario.output", s.output.path);
    if (!s.output.format.empty() && s.output.format != "json" && s.output.format != "csv")
      throw std::invalid_argument("scenario.output.format: must be \"json\" or \"csv\"");
  }
  return s;
}

Json scenario_to_json(const Scenario& s) {
  Json g;
  g["horizon"] = s.game.horizon;
  g["a_x"] = s.game.a_x;
  g["a_theta"] = s.game.a_theta;
  g["sigma_x2"] = s.game.sigma_x2;
  g["sigma_theta2"] = s.game.sigma_theta2;
  g["rho"] = s.game.rho;
  if (s.game.sigma_w2) g["sigma_w2"] = *s.game.sigma_w2;
  if (s.game.sigma_v2) g["sigma_v2"] = *s.game.sigma_v2;
  g["stationary"] = s.game.stationary;

  Json v;
  v["mode"] = s.solver.mode;
  v["starts"] = s.solver.starts;
  v["max_iters"] = s.solver.max_iters;
  v["xtol"] = s.solver.xtol;
  v["ftol"] = s.solver.ftol;
  v["seed"] = s.solver.seed;
  v["constrain_d_zero"] = s.solver.constrain_d_zero;

  Json doc;
  doc["game"] = g;
  doc["solver"] = v;
  if (s.sweep) {
    Json w;
    w["a_x_grid"] = s.sweep->a_x_grid;
    w["a_theta_grid"] = s.sweep->a_theta_grid;
    doc["sweep"] = w;
  }
  Json m;
  m["samples"] = s.sim.samples;
  m["seed"] = s.sim.seed;
  doc["sim"] = m;
  Json nj;
  nj["iterations"] = s.nash.iterations;
  doc["nash"] = nj;
  Json o;
  o["format"] = s.output.format;
  o["path"] = s.output.path;
  doc["output"] = o;
  return doc;
}

DynamicSolveOptions solve_options_from(const Scenario& s, unsigned threads) {
  DynamicSolveOptions opts;
  opts.mode = parse_solve_mode(s.solver.mode);
  opts.constrain_d_zero = s.solver.constrain_d_zero;
  opts.starts = s.solver.starts;
  opts.seed = s.solver.seed;
  opts.ftol = s.solver.ftol;
  opts.xtol = s.solver.xtol;
  opts.max_iters = s.solver.max_iters;
  opts.threads = threads;
  return opts;
}

// --- result serialization --------------------------------------------------

Json static_solution_to_json(const StaticSolution& sol) {
  Json doc;
  doc["b"] = sol.b;
  doc["c"] = sol.c;
  doc["d"] = sol.d;
  doc["cost"] = sol.cost;
  return doc;
}

Json equilibrium_to_json(const EquilibriumSolution& sol) {
  Json doc;
  Json policy;
  policy["b"] = sol.policy.b;
  policy["c"] = sol.policy.c;
  policy["d"] = sol.policy.d;
  doc["policy"] = policy;
  Json receiver;
  receiver["kappa"] = sol.receiver.kappa;
  doc["receiver"] = receiver;
  doc["total_cost"] = sol.total_cost;
  doc["stage_costs"] = sol.stage_costs;
  Json diag;
  diag["starts"] = sol.diagnostics.starts;
  diag["converged_starts"] = sol.diagnostics.converged_starts;
  diag["best_objective"] = sol.diagnostics.best_objective;
  diag["spread"] = sol.diagnostics.spread;
  diag["suspect_landscape"] = sol.diagnostics.suspect_landscape;
  doc["diagnostics"] = diag;
  return doc;
}

EquilibriumSolution equilibrium_from_json(const Json& doc) {
  EquilibriumSolution sol;
  const Json& policy = doc.at("policy");
  sol.policy.b = triangular_from_json(policy.at("b"), "solution.policy.b");
  sol.policy.c = triangular_from_json(policy.at("c"), "solution.policy.c");
  sol.policy.d = triangular_from_json(policy.at("d"), "solution.policy.d");
  sol.receiver.kappa = triangular_from_json(doc.at("receiver").at("kappa"),
                                            "solution.receiver.kappa");
  sol.total_cost = doc.at("total_cost").get<double>();
  sol.stage_costs = doc.at("stage_costs").get<std::vector<double>>();
  const Json& diag = doc.at("diagnostics");
  sol.diagnostics.starts = diag.at("starts").get<int>();
  sol.diagnostics.converged_starts = diag.at("converged_starts").get<int>();
  sol.diagnostics.best_objective = diag.at("best_objective").get<double>();
  sol.diagnostics.spread = diag.at("spread").get<double>();
  sol.diagnostics.suspect_landscape = diag.at("suspect_landscape").get<bool>();
  return sol;
}

std::string format_sig9(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

Json sweep_to_json(const std::vector<SweepRow>& rows) {
  Json arr = Json::array();
  for (const SweepRow& r : rows) {
    Json row;
    row["a_x"] = r.a_x;
    row["a_theta"] = r.a_theta;
    row["d1_abs"] = r.d1_abs;
    row["cost_unconstrained"] = r.cost_unconstrained;
    row["cost_d0"] = r.cost_d0;
    row["gap"] = r.gap;
    row["eq38_residual"] = r.separability_residual;
    row["solver_ok"] = r.solver_ok;
    if (!r.note.empty()) row["note"] = r.note;
    arr.push_back(row);
  }
  return arr;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "a_x,a_theta,d1_abs,cost_unconstrained,cost_d0,gap,eq38_residual\n";
  for (const SweepRow& r : rows) {
    out += format_sig9(r.a_x) + "," + format_sig9(r.a_theta) + "," + format_sig9(r.d1_abs) +
           "," + format_sig9(r.cost_unconstrained) + "," + format_sig9(r.cost_d0) + "," +
           format_sig9(r.gap) + "," + format_sig9(r.separability_residual) + "\n";
  }
  return out;
}

Json trajectory_to_json(const BrTrajectory& traj) {
  Json doc;
  Json arr = Json::array();
  for (std::size_t t = 0; t < traj.iterations.size(); ++t) {
    const BrIteration& it = traj.iterations[t];
    Json row;
    row["iter"] = t + 1;
    row["kappa_11"] = it.kappa11;
    row["sender_gain_11"] = it.sender_gain11;
    row["sender_cost"] = it.sender_cost;
    row["receiver_cost"] = it.receiver_cost;
    row["mismatch_gap"] = it.mismatch_gap;
    arr.push_back(row);
  }
  doc["iterations"] = arr;
  doc["fitted_ratio"] = traj.fitted_ratio;
  doc["theoretical_ratio"] = traj.theoretical_ratio;
  doc["mismatch_lower_bound"] = traj.mismatch_lower_bound;
  doc["fixed_point_reached"] = traj.fixed_point_reached;
  if (traj.halted_at) doc["halted_at"] = *traj.halted_at;
  return doc;
}

std::string trajectory_to_csv(const BrTrajectory& traj) {
  std::string out = "iter,kappa_11,sender_gain_11,sender_cost,receiver_cost,mismatch_gap\n";
  for (std::size_t t = 0; t < traj.iterations.size(); ++t) {
    const BrIteration& it = traj.iterations[t];
    out += std::to_string(t + 1) + "," + format_sig9(it.kappa11) + "," +
           format_sig9(it.sender_gain11) + "," + format_sig9(it.sender_cost) + "," +
           format_sig9(it.receiver_cost) + "," + format_sig9(it.mismatch_gap) + "\n";
  }
  return out;
}

Json sim_report_to_json(const SimReport& report) {
  Json doc;
  doc["samples"] = report.samples;
  doc["seed"] = report.seed;
  doc["jt_mean"] = report.jt_mean;
  doc["jt_se"] = report.jt_se;
  doc["jr_mean"] = report.jr_mean;
  doc["jr_se"] = report.jr_se;
  Json moments = Json::array();
  for (Eigen::Index i = 0; i < report.second_moments.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < report.second_moments.cols(); ++j)
      row.push_back(report.second_moments(i, j));
    moments.push_back(row);
  }
  doc["second_moments"] = moments;
  return doc;
}

}  // namespace sigeq
