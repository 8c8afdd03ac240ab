#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sigeq/config.hpp"
#include "sigeq/policy.hpp"

namespace sigeq {

/// AR(1) second moments over the horizon, 0-based stage indexing.
/// xt(j,k) = cov(x_{j+1}, theta_{k+1}) = a_x^j · a_theta^k · rho.
struct ProcessCovariances {
  Eigen::MatrixXd xx;  // cov(x_j, x_k)
  Eigen::MatrixXd tt;  // cov(theta_j, theta_k)
  Eigen::MatrixXd xt;  // cov(x_j, theta_k)
};

ProcessCovariances process_covariances(const GameConfig& config);

/// Exact joint covariance of (x_1..x_n, theta_1..theta_n, y_1..y_n) under a
/// linear sender policy. The z noises are marginalized: they contribute
/// sum_i d[j][i]·d[k][i] to cov(y_j, y_k) and nothing elsewhere.
struct JointCovariance {
  int horizon = 0;
  Eigen::MatrixXd sigma;  // 3n x 3n, symmetric PSD

  int x_index(int k) const { return k; }
  int theta_index(int k) const { return horizon + k; }
  int y_index(int k) const { return 2 * horizon + k; }
};

JointCovariance build_joint_covariance(const GameConfig& config, const SenderPolicy& policy);

/// Linear MMSE estimate of one variable from a set of observed variables.
/// Gains come from the eigenvalue-thresholded pseudo-inverse of the
/// observation block, so singular observation sets are handled: the
/// projection (and both variances) stay well-defined even when the gain
/// vector is not unique.
struct MmseResult {
  Eigen::VectorXd gains;      // one per observation, in the given order
  double predicted_variance = 0.0;
  double residual_variance = 0.0;
};

MmseResult mmse(const JointCovariance& joint, int target, const std::vector<int>& observations);

/// Receiver's unique best response: kappa[k][j] are the MMSE gains of x_k
/// given y_1..y_k.
ReceiverPolicy receiver_best_response(const GameConfig& config, const SenderPolicy& policy);
ReceiverPolicy receiver_best_response(const JointCovariance& joint);

/// Per-stage sender costs E{(x_k + theta_k - u_k)^2} against a fixed
/// receiver, evaluated exactly from the joint covariance.
std::vector<double> sender_stage_costs(const GameConfig& config, const SenderPolicy& policy,
                                       const ReceiverPolicy& receiver);
double sender_cost(const GameConfig& config, const SenderPolicy& policy,
                   const ReceiverPolicy& receiver);

/// Total receiver cost sum_k E{(x_k - u_k)^2}.
double receiver_cost(const GameConfig& config, const SenderPolicy& policy,
                     const ReceiverPolicy& receiver);

/// Sender cost under the receiver's best response: the single authoritative
/// objective minimized by every solver in this library.
double stackelberg_objective(const GameConfig& config, const SenderPolicy& policy);
std::vector<double> stackelberg_stage_costs(const GameConfig& config, const SenderPolicy& policy);

}  // namespace sigeq
