#include "sigeq/stackelberg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sigeq/parallel.hpp"

namespace sigeq {

// ---------------------------------------------------------------------------
// Static solution
// ---------------------------------------------------------------------------

StaticSolution solve_static(double sigma_x2, double sigma_theta2, double rho) {
  if (!(sigma_x2 > 0.0)) throw std::invalid_argument("solve_static: sigma_x2 must be > 0");
  if (!(sigma_theta2 > 0.0))
    throw std::invalid_argument("solve_static: sigma_theta2 must be > 0");
  const double s = sigma_theta2 + rho;
  if (s < 0.0) throw std::invalid_argument("solve_static: sigma_theta2 + rho must be >= 0");

  StaticSolution sol;
  sol.b = 1.0;
  sol.d = 0.0;
  if (std::abs(s) < 1e-12) {
    sol.c = 1.0;  // analytic limit: full revelation
  } else {
    const double sigma_x = std::sqrt(sigma_x2);
    sol.c = (-sigma_x2 + sigma_x * std::sqrt(sigma_x2 + 4.0 * s)) / (2.0 * s);
  }

  GameConfig cfg;
  cfg.horizon = 1;
  cfg.sigma_x2 = sigma_x2;
  cfg.sigma_theta2 = sigma_theta2;
  cfg.rho = rho;
  cfg.stationary = false;
  cfg.sigma_w2 = 0.0;
  cfg.sigma_v2 = 0.0;
  sol.cost = stackelberg_objective(validate_config(cfg),
                                   SenderPolicy::memoryless({{sol.b, sol.c, sol.d}}));
  return sol;
}

// ---------------------------------------------------------------------------
// Whitened-moment recursion
// ---------------------------------------------------------------------------

namespace {

struct SignalStats {
  double variance = 0.0;  // E{y~^2}
  double corr_x = 0.0;    // E{x~ y~}
  double corr_theta = 0.0;
};

SignalStats signal_stats(const WhitenedMoments& m, const StagePolicy& p) {
  SignalStats s;
  s.corr_x = p.b * m.var_x + p.c * m.cov;
  s.corr_theta = p.b * m.cov + p.c * m.var_theta;
  s.variance = p.b * s.corr_x + p.c * s.corr_theta + p.d * p.d;
  return s;
}

WhitenedMoments posterior(const WhitenedMoments& m, const StagePolicy& p) {
  const SignalStats s = signal_stats(m, p);
  if (s.variance <= 0.0) return m;  // uninformative signal
  WhitenedMoments out;
  out.var_x = m.var_x - s.corr_x * s.corr_x / s.variance;
  out.var_theta = m.var_theta - s.corr_theta * s.corr_theta / s.variance;
  out.cov = m.cov - s.corr_x * s.corr_theta / s.variance;
  return out;
}

WhitenedMoments time_step(const GameConfig& cfg, const WhitenedMoments& m) {
  WhitenedMoments out;
  out.var_x = cfg.a_x * cfg.a_x * m.var_x + cfg.w2();
  out.var_theta = cfg.a_theta * cfg.a_theta * m.var_theta + cfg.v2();
  out.cov = cfg.a_x * cfg.a_theta * m.cov;
  return out;
}

}  // namespace

WhitenedMoments propagate_whitened_moments(const GameConfig& config,
                                           const std::vector<StagePolicy>& stages, int upto) {
  if (upto < 0 || upto >= config.horizon)
    throw std::invalid_argument("propagate_whitened_moments: stage out of range");
  if (static_cast<int>(stages.size()) < upto)
    throw std::invalid_argument("propagate_whitened_moments: policy prefix too short");
  WhitenedMoments m{config.sigma_x2, config.sigma_theta2, config.rho};
  for (int k = 0; k < upto; ++k) m = time_step(config, posterior(m, stages[k]));
  return m;
}

double memoryless_objective(const GameConfig& config, const std::vector<StagePolicy>& stages) {
  if (static_cast<int>(stages.size()) != config.horizon)
    throw std::invalid_argument("memoryless_objective: need one stage policy per stage");
  return stackelberg_objective(config, SenderPolicy::memoryless(stages));
}

double memoryless_objective_whitened(const GameConfig& config,
                                     const std::vector<StagePolicy>& stages) {
  if (static_cast<int>(stages.size()) != config.horizon)
    throw std::invalid_argument("memoryless_objective: need one stage policy per stage");
  // Stage-k cost splits into the whitened-frame estimation residual plus the
  // power of the bias component already pinned down by past signals:
  //   E{(x_k+th_k-u_k)^2} = E{(x~+th~)^2} - corr_x(corr_x+2corr_th)/var(y~)
  //                         + (var(th_k) - var_theta~).
  WhitenedMoments m{config.sigma_x2, config.sigma_theta2, config.rho};
  double var_theta_prior = config.sigma_theta2;
  double total = 0.0;
  for (int k = 0; k < config.horizon; ++k) {
    const SignalStats s = signal_stats(m, stages[k]);
    double stage = m.var_x + 2.0 * m.cov + m.var_theta;
    if (s.variance > 0.0) stage -= s.corr_x * (s.corr_x + 2.0 * s.corr_theta) / s.variance;
    stage += var_theta_prior - m.var_theta;
    total += stage;
    m = time_step(config, posterior(m, stages[k]));
    var_theta_prior =
        config.a_theta * config.a_theta * var_theta_prior + config.v2();
  }
  return total;
}

// ---------------------------------------------------------------------------
// Two-stage closed form
// ---------------------------------------------------------------------------

TwoStageTerms eval_two_stage_closed_form(const GameConfig& config, const StagePolicy& first,
                                         const StagePolicy& last,
                                         const WhitenedMoments& prior) {
  if (last.d != 0.0)
    throw std::invalid_argument("eval_two_stage_closed_form: last-stage noise weight must be 0");

  const WhitenedMoments next = [&] {
    WhitenedMoments out;
    out.var_x = config.a_x * config.a_x * prior.var_x + config.w2();
    out.var_theta = config.a_theta * config.a_theta * prior.var_theta + config.v2();
    out.cov = config.a_x * config.a_theta * prior.cov;
    return out;
  }();

  const SignalStats s1 = signal_stats(prior, first);
  const SignalStats s2 = signal_stats(next, last);
  if (s1.variance <= 0.0 || s2.variance <= 0.0)
    throw std::domain_error("eval_two_stage_closed_form: degenerate signal (zero variance)");

  TwoStageTerms t;
  t.phi_x = {s1.corr_x, s2.corr_x};
  t.phi_theta = {s1.corr_theta, s2.corr_theta};

  const double denom_last = last.b * s2.corr_x + last.c * s2.corr_theta;  // = E{y~_n^2}
  t.delta = (config.a_x * s1.corr_x * s2.corr_theta -
             config.a_theta * s1.corr_theta * s2.corr_x) /
            denom_last;

  const double denom_first =
      first.b * s1.corr_x + first.c * s1.corr_theta + first.d * first.d;  // = E{y~_{n-1}^2}
  t.whitened_signal_power = first.b * s1.corr_x + first.c * s1.corr_theta;

  const double cross = config.a_x * last.b * s1.corr_x + config.a_theta * last.c * s1.corr_theta;
  t.residual_signal_power = t.whitened_signal_power - cross * cross / denom_last;
  const double denom_coupling = t.residual_signal_power + first.d * first.d;
  if (denom_coupling <= 0.0)
    throw std::domain_error(
        "eval_two_stage_closed_form: degenerate residual signal at the first stage");

  t.term_first = s1.corr_x * (2.0 * s1.corr_theta + s1.corr_x) / denom_first;
  t.term_last = s2.corr_x * (2.0 * s2.corr_theta + s2.corr_x) / denom_last;
  t.term_coupling = last.c * (last.c - 2.0 * last.b) * t.delta * t.delta / denom_coupling;
  t.objective = t.term_first + t.term_last + t.term_coupling;
  return t;
}

// ---------------------------------------------------------------------------
// Dynamic solver
// ---------------------------------------------------------------------------

SolveMode parse_solve_mode(const std::string& name) {
  if (name == "full") return SolveMode::full_memory;
  if (name == "memoryless") return SolveMode::memoryless;
  throw std::invalid_argument("solver.mode: must be \"full\" or \"memoryless\"");
}

std::string to_string(SolveMode mode) {
  return mode == SolveMode::full_memory ? "full" : "memoryless";
}

namespace {

// Maps between the flat optimizer vector and SenderPolicy. Memoryless:
// (b_k, c_k[, d_k]) per stage; full memory: row-major triangular rows.
struct Parameterization {
  SolveMode mode;
  int n;
  bool with_d;

  int dim() const {
    const int per_stage = with_d ? 3 : 2;
    if (mode == SolveMode::memoryless) return per_stage * n;
    return per_stage * n * (n + 1) / 2;
  }

  SenderPolicy unpack(const Eigen::VectorXd& v) const {
    SenderPolicy p(n);
    int i = 0;
    for (int k = 0; k < n; ++k) {
      const int width = mode == SolveMode::memoryless ? 1 : k + 1;
      const int base = mode == SolveMode::memoryless ? k : 0;
      for (int j = 0; j < width; ++j) p.b[k][base + j] = v(i++);
      for (int j = 0; j < width; ++j) p.c[k][base + j] = v(i++);
      if (with_d)
        for (int j = 0; j < width; ++j) p.d[k][base + j] = v(i++);
    }
    return p;
  }

  Eigen::VectorXd pack(const SenderPolicy& p) const {
    Eigen::VectorXd v(dim());
    int i = 0;
    for (int k = 0; k < n; ++k) {
      const int width = mode == SolveMode::memoryless ? 1 : k + 1;
      const int base = mode == SolveMode::memoryless ? k : 0;
      for (int j = 0; j < width; ++j) v(i++) = p.b[k][base + j];
      for (int j = 0; j < width; ++j) v(i++) = p.c[k][base + j];
      if (with_d)
        for (int j = 0; j < width; ++j) v(i++) = p.d[k][base + j];
    }
    return v;
  }

  void fill_box(std::vector<double>& lo, std::vector<double>& hi) const {
    lo.clear();
    hi.clear();
    for (int k = 0; k < n; ++k) {
      const int width = mode == SolveMode::memoryless ? 1 : k + 1;
      for (int j = 0; j < 2 * width; ++j) {
        lo.push_back(-3.0);
        hi.push_back(3.0);
      }
      if (with_d)
        for (int j = 0; j < width; ++j) {
          lo.push_back(0.0);
          hi.push_back(3.0);
        }
    }
  }
};

SenderPolicy repeated_static_policy(const GameConfig& config) {
  const StaticSolution s = solve_static(config.sigma_x2, config.sigma_theta2, config.rho);
  return SenderPolicy::memoryless(
      std::vector<StagePolicy>(config.horizon, {s.b, s.c, 0.0}));
}

SenderPolicy all_reveal_policy(const GameConfig& config) {
  return SenderPolicy::memoryless(std::vector<StagePolicy>(config.horizon, {1.0, 0.0, 0.0}));
}

}  // namespace

EquilibriumSolution solve_dynamic(const GameConfig& config, const DynamicSolveOptions& options) {
  const GameConfig cfg = validate_config(config);
  const int n = cfg.horizon;
  if (options.mode == SolveMode::full_memory && n > 4)
    throw std::invalid_argument("solver: full-memory mode supports horizon <= 4");
  if (n > 10) throw std::invalid_argument("solver: horizon <= 10 supported");

  const Parameterization par{options.mode, n, !options.constrain_d_zero};
  const Objective objective = [&](const Eigen::VectorXd& v) {
    return stackelberg_objective(cfg, par.unpack(v));
  };

  std::vector<double> lo, hi;
  par.fill_box(lo, hi);
  const std::vector<Eigen::VectorXd> warm = {par.pack(repeated_static_policy(cfg)),
                                             par.pack(all_reveal_policy(cfg))};

  MultistartOptions ms;
  ms.starts = options.starts;
  ms.seed = options.seed;
  ms.threads = options.threads;
  ms.local.ftol = options.ftol;
  ms.local.xtol = options.xtol;
  ms.local.max_iters = options.max_iters;
  const MultistartResult opt = optimize_multistart(objective, lo, hi, warm, ms);

  EquilibriumSolution sol;
  sol.policy = canonicalize_policy(par.unpack(opt.best_x));
  sol.receiver = receiver_best_response(cfg, sol.policy);
  sol.stage_costs = stackelberg_stage_costs(cfg, sol.policy);
  sol.total_cost = 0.0;
  for (double c : sol.stage_costs) sol.total_cost += c;
  sol.diagnostics.starts = opt.starts;
  sol.diagnostics.converged_starts = opt.converged_starts;
  sol.diagnostics.best_objective = opt.best_value;
  sol.diagnostics.spread = opt.spread;
  sol.diagnostics.suspect_landscape = opt.spread > 1e-6;
  return sol;
}

// ---------------------------------------------------------------------------
// Dichotomy sweep
// ---------------------------------------------------------------------------

std::vector<SweepRow> dichotomy_sweep(const std::vector<double>& a_x_grid,
                                      const std::vector<double>& a_theta_grid,
                                      const GameConfig& base, const DynamicSolveOptions& options,
                                      unsigned grid_threads) {
  if (a_x_grid.empty() || a_theta_grid.empty())
    throw std::invalid_argument("sweep: grids must be non-empty");
  for (double a : a_x_grid)
    if (std::abs(a) >= 1.0) throw std::invalid_argument("sweep: a_x grid values must be in (-1,1)");
  for (double a : a_theta_grid)
    if (std::abs(a) >= 1.0)
      throw std::invalid_argument("sweep: a_theta grid values must be in (-1,1)");

  std::vector<std::pair<double, double>> points;
  points.reserve(a_x_grid.size() * a_theta_grid.size());
  for (double ax : a_x_grid)
    for (double at : a_theta_grid) points.emplace_back(ax, at);

  std::vector<SweepRow> rows(points.size());
  parallel_for(points.size(), grid_threads, [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.a_x = points[i].first;
    row.a_theta = points[i].second;
    try {
      GameConfig cfg = base;
      cfg.a_x = row.a_x;
      cfg.a_theta = row.a_theta;
      cfg.stationary = true;
      cfg.sigma_w2.reset();  // re-derive for the new coefficients
      cfg.sigma_v2.reset();
      cfg = validate_config(cfg);

      DynamicSolveOptions local = options;
      local.constrain_d_zero = false;
      const EquilibriumSolution free = solve_dynamic(cfg, local);
      local.constrain_d_zero = true;
      const EquilibriumSolution pure = solve_dynamic(cfg, local);

      row.d1_abs = std::abs(free.policy.d[0][0]);
      row.cost_unconstrained = free.total_cost;
      row.cost_d0 = pure.total_cost;
      row.gap = row.cost_d0 - row.cost_unconstrained;
      if (cfg.horizon >= 2) {
        const auto stages = pure.policy.diagonal();
        row.separability_residual = cfg.a_x * stages[1].b * stages[0].c -
                                    cfg.a_theta * stages[0].b * stages[1].c;
      }
      row.solver_ok =
          free.diagnostics.converged_starts > 0 && pure.diagnostics.converged_starts > 0;
      if (!row.solver_ok) row.note = "no start converged";
    } catch (const std::exception& e) {
      row.solver_ok = false;
      row.note = e.what();
    }
  });
  return rows;
}

}  // namespace sigeq
