#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace sigeq {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct NelderMeadOptions {
  double ftol = 1e-12;
  double xtol = 1e-9;
  int max_iters = 0;  // 0: 500 * dimension
  double initial_step = 0.5;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Downhill simplex local minimization. Deterministic: depends only on the
/// start point and options.
NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& start,
                             const NelderMeadOptions& options = {});

struct MultistartOptions {
  int starts = 64;
  std::uint64_t seed = 0;
  NelderMeadOptions local;
  unsigned threads = 1;  // start-level parallelism; result independent of it
  int polish_rounds = 2; // extra local runs from the incumbent best
};

struct MultistartResult {
  Eigen::VectorXd best_x;
  double best_value = 0.0;
  int starts = 0;
  int converged_starts = 0;
  double spread = 0.0;  // max - min terminal value over converged starts
  bool best_converged = false;
};

/// Derivative-free multi-start minimization: quasi-random points in the box
/// (low-discrepancy additive recurrence, offset by the seed) plus any
/// caller-supplied warm starts, each refined by nelder_mead. Ties between
/// equal-valued starts break toward the lower start index, so the result is
/// deterministic regardless of thread count.
MultistartResult optimize_multistart(const Objective& f, const std::vector<double>& lo,
                                     const std::vector<double>& hi,
                                     const std::vector<Eigen::VectorXd>& warm_starts,
                                     const MultistartOptions& options = {});

}  // namespace sigeq
