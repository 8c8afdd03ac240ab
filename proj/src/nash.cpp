#include "sigeq/nash.hpp"

#include <cmath>
#include <stdexcept>

namespace sigeq {

SenderPolicy sender_best_response(const GameConfig& config, const ReceiverPolicy& receiver) {
  const int n = config.horizon;
  if (receiver.horizon() != n)
    throw std::invalid_argument("receiver: horizon does not match config");
  for (int k = 0; k < n; ++k)
    if (receiver.kappa[k][k] == 0.0)
      throw std::invalid_argument("sender_best_response: kappa[k][k] must be nonzero");

  SenderPolicy p(n);
  for (int k = 0; k < n; ++k) {
    const double inv = 1.0 / receiver.kappa[k][k];
    p.b[k][k] = inv;
    p.c[k][k] = inv;
    // Cancel what earlier signals contribute to u_k so that u_k = x_k + theta_k.
    for (int j = 0; j < k; ++j) {
      double bsum = 0.0, csum = 0.0;
      for (int i = j; i < k; ++i) {
        bsum += receiver.kappa[k][i] * p.b[i][j];
        csum += receiver.kappa[k][i] * p.c[i][j];
      }
      p.b[k][j] = -inv * bsum;
      p.c[k][j] = -inv * csum;
    }
  }
  return p;
}

ReceiverPolicy default_initial_receiver(int horizon) {
  ReceiverPolicy rp(horizon);
  for (int k = 0; k < horizon; ++k) rp.kappa[k][k] = 1.0;
  return rp;
}

BrTrajectory best_response_dynamics(const GameConfig& config,
                                    const ReceiverPolicy& initial_receiver, int iterations) {
  if (iterations < 1) throw std::invalid_argument("nash: iterations must be >= 1");
  const GameConfig cfg = validate_config(config);

  BrTrajectory traj;
  traj.theoretical_ratio =
      (cfg.sigma_x2 + cfg.rho) / (cfg.sigma_x2 + cfg.sigma_theta2 + 2.0 * cfg.rho);
  traj.mismatch_lower_bound = 1.0 - traj.theoretical_ratio;

  ReceiverPolicy receiver = initial_receiver;
  double min_step = 0.0;
  double ratio_log_sum = 0.0;
  int ratio_count = 0;

  for (int t = 0; t < iterations; ++t) {
    for (int k = 0; k < cfg.horizon; ++k) {
      if (std::abs(receiver.kappa[k][k]) < 1e-280) {
        traj.halted_at = t;
        break;
      }
    }
    if (traj.halted_at) break;

    BrIteration it;
    it.sender = sender_best_response(cfg, receiver);
    it.sender_cost = sender_cost(cfg, it.sender, receiver);
    it.sender_gain11 = it.sender.b[0][0];

    const double prev11 = receiver.kappa[0][0];
    ReceiverPolicy replied = receiver_best_response(cfg, it.sender);
    it.receiver = replied;
    it.receiver_cost = receiver_cost(cfg, it.sender, replied);
    it.kappa11 = replied.kappa[0][0];
    it.mismatch_gap = prev11 != 0.0 ? std::abs(it.kappa11 - prev11) / std::abs(prev11) : 0.0;

    double step = 0.0;
    for (int k = 0; k < cfg.horizon; ++k)
      for (int j = 0; j <= k; ++j)
        step = std::max(step, std::abs(replied.kappa[k][j] - receiver.kappa[k][j]));
    min_step = t == 0 ? step : std::min(min_step, step);

    if (prev11 != 0.0 && it.kappa11 / prev11 > 0.0) {
      ratio_log_sum += std::log(it.kappa11 / prev11);
      ++ratio_count;
    }
    receiver = replied;
    traj.iterations.push_back(std::move(it));
  }

  traj.fitted_ratio = ratio_count > 0 ? std::exp(ratio_log_sum / ratio_count) : 0.0;
  traj.fixed_point_reached = !traj.iterations.empty() && min_step <= 1e-9;
  return traj;
}

}  // namespace sigeq
