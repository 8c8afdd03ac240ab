#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "sigeq/config.hpp"
#include "sigeq/policy.hpp"

namespace sigeq {

struct SimReport {
  long long samples = 0;
  std::uint64_t seed = 0;
  double jt_mean = 0.0;
  double jt_se = 0.0;
  double jr_mean = 0.0;
  double jr_se = 0.0;
  Eigen::MatrixXd second_moments;  // empirical 3n x 3n, (x, theta, y) order
};

/// Seeded Monte Carlo of the game: N independent trajectories, each drawn
/// from a generator keyed by (seed, trajectory index). Chunked deterministic
/// aggregation with compensated sums, so reports are bit-identical for fixed
/// inputs regardless of thread count.
SimReport sample_trajectories(const GameConfig& config, const SenderPolicy& policy,
                              const ReceiverPolicy& receiver, long long samples,
                              std::uint64_t seed, unsigned threads = 1);

}  // namespace sigeq
