#include "sigeq/selfcheck.hpp"

#include <cmath>
#include <sstream>

#include "sigeq/gauss.hpp"
#include "sigeq/rng.hpp"
#include "sigeq/stackelberg.hpp"

namespace sigeq {

namespace {

GameConfig random_stationary(CounterRng& rng, int horizon) {
  const double a_x = 1.8 * rng.next_uniform() - 0.9;
  const double a_theta = 1.8 * rng.next_uniform() - 0.9;
  const double sx = 0.5 + 1.5 * rng.next_uniform();
  const double st = 0.5 + 1.5 * rng.next_uniform();
  return make_stationary(horizon, a_x, a_theta, sx, st, 0.0);
}

SenderPolicy random_policy(CounterRng& rng, int horizon) {
  SenderPolicy p(horizon);
  for (int k = 0; k < horizon; ++k)
    for (int j = 0; j <= k; ++j) {
      p.b[k][j] = 4.0 * rng.next_uniform() - 2.0;
      p.c[k][j] = 4.0 * rng.next_uniform() - 2.0;
      p.d[k][j] = 2.0 * rng.next_uniform() - 1.0;
    }
  return p;
}

CheckResult check_scale_invariance(std::uint64_t seed) {
  CounterRng rng(seed, 101);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_uniform() * 3.0);
    const GameConfig cfg = random_stationary(rng, n);
    const SenderPolicy policy = random_policy(rng, n);
    std::vector<double> alpha(n);
    for (double& a : alpha) {
      a = 2.0 * rng.next_uniform() - 1.0;
      a += a >= 0.0 ? 0.2 : -0.2;  // keep away from zero
      a *= 5.0;
    }
    const double base = stackelberg_objective(cfg, policy);
    const double scaled = stackelberg_objective(cfg, policy.scaled(alpha));
    worst = std::max(worst, std::abs(scaled - base) / std::max(1e-30, std::abs(base)));
  }
  std::ostringstream os;
  os << "max relative deviation " << worst << " over 100 random scalings (bound 1e-10)";
  return {"scale_invariance", worst <= 1e-10, os.str()};
}

CheckResult check_memory_equivalence(std::uint64_t seed, unsigned threads) {
  const GameConfig cfg = make_stationary(2, 0.6, 0.15);
  DynamicSolveOptions opts;
  opts.seed = seed;
  opts.threads = threads;
  opts.mode = SolveMode::memoryless;
  const EquilibriumSolution ml = solve_dynamic(cfg, opts);
  opts.mode = SolveMode::full_memory;
  const EquilibriumSolution full = solve_dynamic(cfg, opts);
  const double diff = std::abs(ml.diagnostics.best_objective - full.diagnostics.best_objective);
  std::ostringstream os;
  os << "memoryless " << ml.diagnostics.best_objective << " vs full "
     << full.diagnostics.best_objective << ", |diff| " << diff << " (bound 1e-5)";
  return {"memoryless_equivalence", diff <= 1e-5, os.str()};
}

CheckResult check_two_stage_closed_form(std::uint64_t seed) {
  CounterRng rng(seed, 103);
  double mean = 0.0, m2 = 0.0;
  int count = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const GameConfig cfg = random_stationary(rng, 2);
    StagePolicy first{3.0 * rng.next_uniform() - 1.5, 3.0 * rng.next_uniform() - 1.5,
                      1.5 * rng.next_uniform()};
    StagePolicy last{3.0 * rng.next_uniform() - 1.5, 3.0 * rng.next_uniform() - 1.5, 0.0};
    if (std::abs(first.b) + std::abs(first.c) + std::abs(first.d) < 0.2) continue;
    if (std::abs(last.b) + std::abs(last.c) < 0.2) continue;
    const WhitenedMoments prior{cfg.sigma_x2, cfg.sigma_theta2, cfg.rho};
    const TwoStageTerms terms = eval_two_stage_closed_form(cfg, first, last, prior);
    const double direct = memoryless_objective(cfg, {first, last});
    // Normalize by the parameter-free constant so configs are comparable.
    const double var_x2 = cfg.a_x * cfg.a_x * cfg.sigma_x2 + cfg.w2();
    const double var_t2 = cfg.a_theta * cfg.a_theta * cfg.sigma_theta2 + cfg.v2();
    const double cov2 = cfg.a_x * cfg.a_theta * cfg.rho;
    const double expected = cfg.sigma_x2 + 2.0 * cfg.rho + cfg.sigma_theta2 + var_x2 +
                            2.0 * cov2 + var_t2;
    const double sum = (direct + terms.objective) / expected;
    ++count;
    const double delta = sum - mean;
    mean += delta / count;
    m2 += delta * (sum - mean);
  }
  const double rel_var = count > 1 ? (m2 / (count - 1)) / (mean * mean) : 1.0;
  std::ostringstream os;
  os << "relative variance of direct+closed-form sum " << rel_var << " over " << count
     << " points (bound 1e-8)";
  return {"two_stage_closed_form_offset", count >= 100 && rel_var <= 1e-8, os.str()};
}

CheckResult check_last_stage_purity(std::uint64_t seed, unsigned threads) {
  CounterRng rng(seed, 104);
  double worst_d = 0.0;
  bool c_in_range = true;
  for (int trial = 0; trial < 3; ++trial) {
    const GameConfig cfg = random_stationary(rng, 2);
    DynamicSolveOptions opts;
    opts.seed = seed + trial;
    opts.threads = threads;
    const EquilibriumSolution sol = solve_dynamic(cfg, opts);
    const auto stages = sol.policy.diagonal();
    worst_d = std::max(worst_d, std::abs(stages.back().d));
    const double c_last = stages.back().c;
    if (!(c_last > 0.0 && c_last < 1.0)) c_in_range = false;
  }
  std::ostringstream os;
  os << "max canonical last-stage |d| " << worst_d << " (bound 1e-4), last-stage c in (0,1): "
     << (c_in_range ? "yes" : "no");
  return {"last_stage_purity", worst_d <= 1e-4 && c_in_range, os.str()};
}

}  // namespace

std::vector<CheckResult> run_self_checks(std::uint64_t seed, unsigned threads) {
  std::vector<CheckResult> results;
  results.push_back(check_scale_invariance(seed));
  results.push_back(check_memory_equivalence(seed, threads));
  results.push_back(check_two_stage_closed_form(seed));
  results.push_back(check_last_stage_purity(seed, threads));
  return results;
}

}  // namespace sigeq
