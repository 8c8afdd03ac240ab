#pragma once

#include <optional>
#include <vector>

#include "sigeq/config.hpp"
#include "sigeq/gauss.hpp"
#include "sigeq/policy.hpp"

namespace sigeq {

/// Sender's zero-cost reply to a fixed linear receiver: on-diagonal gains
/// 1/kappa[k][k], off-diagonal terms chosen so that past-signal
/// contributions cancel and u_k = x_k + theta_k exactly, d = 0. Requires
/// kappa[k][k] != 0 at every stage.
SenderPolicy sender_best_response(const GameConfig& config, const ReceiverPolicy& receiver);

struct BrIteration {
  ReceiverPolicy receiver;   // gains after this round's receiver reply
  SenderPolicy sender;       // the zero-cost reply this round started from
  double sender_cost = 0.0;  // against the receiver the sender replied to
  double receiver_cost = 0.0;
  double kappa11 = 0.0;          // first-stage gain after the receiver reply
  double sender_gain11 = 0.0;    // first-stage b of the sender reply
  double mismatch_gap = 0.0;     // |kappa11' - kappa11| / |kappa11|
};

struct BrTrajectory {
  std::vector<BrIteration> iterations;
  double fitted_ratio = 0.0;       // geometric ratio of kappa11 per round
  double theoretical_ratio = 0.0;  // (sigma_x2+rho)/(sigma_x2+sigma_theta2+2rho)
  double mismatch_lower_bound = 0.0;
  bool fixed_point_reached = false;
  std::optional<int> halted_at;  // set if a diagonal gain underflowed
};

/// Alternates sender and receiver best responses. The receiver reply always
/// differs from the gains the sender assumed (the gains shrink geometrically
/// in the first stage), so no fixed point is ever reached.
BrTrajectory best_response_dynamics(const GameConfig& config,
                                    const ReceiverPolicy& initial_receiver, int iterations);

/// Default starting receiver: unit gains on the diagonal, zero elsewhere.
ReceiverPolicy default_initial_receiver(int horizon);

}  // namespace sigeq
