#include "sigeq/gauss.hpp"

#include <cmath>
#include <stdexcept>

namespace sigeq {

namespace {

constexpr double kPinvRelThreshold = 1e-10;

void check_horizons(const GameConfig& config, const SenderPolicy& policy) {
  if (policy.horizon() != config.horizon)
    throw std::invalid_argument("policy: horizon does not match config");
}

}  // namespace

ProcessCovariances process_covariances(const GameConfig& config) {
  const int n = config.horizon;
  ProcessCovariances pc;
  pc.xx.setZero(n, n);
  pc.tt.setZero(n, n);
  pc.xt.setZero(n, n);

  std::vector<double> var_x(n), var_t(n);
  var_x[0] = config.sigma_x2;
  var_t[0] = config.sigma_theta2;
  for (int k = 1; k < n; ++k) {
    var_x[k] = config.a_x * config.a_x * var_x[k - 1] + config.w2();
    var_t[k] = config.a_theta * config.a_theta * var_t[k - 1] + config.v2();
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      pc.xx(j, k) = pc.xx(k, j) = std::pow(config.a_x, k - j) * var_x[j];
      pc.tt(j, k) = pc.tt(k, j) = std::pow(config.a_theta, k - j) * var_t[j];
    }
  }
  // Innovations are independent of everything, so the initial correlation is
  // the only source of x-theta coupling.
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      pc.xt(j, k) = std::pow(config.a_x, j) * std::pow(config.a_theta, k) * config.rho;
  return pc;
}

JointCovariance build_joint_covariance(const GameConfig& config, const SenderPolicy& policy) {
  check_horizons(config, policy);
  const int n = config.horizon;
  const ProcessCovariances pc = process_covariances(config);

  JointCovariance joint;
  joint.horizon = n;
  Eigen::MatrixXd& s = joint.sigma;
  s.setZero(3 * n, 3 * n);

  s.block(0, 0, n, n) = pc.xx;
  s.block(n, n, n, n) = pc.tt;
  s.block(0, n, n, n) = pc.xt;
  s.block(n, 0, n, n) = pc.xt.transpose();

  // cov(y_k, x_m) and cov(y_k, theta_m)
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < n; ++m) {
      double cyx = 0.0, cyt = 0.0;
      for (int i = 0; i <= k; ++i) {
        cyx += policy.b[k][i] * pc.xx(i, m) + policy.c[k][i] * pc.xt(m, i);
        cyt += policy.b[k][i] * pc.xt(i, m) + policy.c[k][i] * pc.tt(i, m);
      }
      s(2 * n + k, m) = s(m, 2 * n + k) = cyx;
      s(2 * n + k, n + m) = s(n + m, 2 * n + k) = cyt;
    }
  }

  // cov(y_j, y_k): bilinear in the coefficients, plus shared-z terms.
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      double v = 0.0;
      for (int i = 0; i <= j; ++i) {
        for (int l = 0; l <= k; ++l) {
          v += policy.b[j][i] * policy.b[k][l] * pc.xx(i, l);
          v += policy.b[j][i] * policy.c[k][l] * pc.xt(i, l);
          v += policy.c[j][i] * policy.b[k][l] * pc.xt(l, i);
          v += policy.c[j][i] * policy.c[k][l] * pc.tt(i, l);
        }
      }
      for (int i = 0; i <= j; ++i) v += policy.d[j][i] * policy.d[k][i];
      s(2 * n + j, 2 * n + k) = s(2 * n + k, 2 * n + j) = v;
    }
  }
  return joint;
}

MmseResult mmse(const JointCovariance& joint, int target, const std::vector<int>& observations) {
  const int dim = static_cast<int>(joint.sigma.rows());
  if (target < 0 || target >= dim)
    throw std::invalid_argument("mmse: target index out of range");
  const int m = static_cast<int>(observations.size());
  MmseResult res;
  res.gains.setZero(m);
  const double prior = joint.sigma(target, target);
  if (m == 0) {
    res.predicted_variance = 0.0;
    res.residual_variance = prior;
    return res;
  }

  Eigen::MatrixXd soo(m, m);
  Eigen::VectorXd sot(m);
  for (int i = 0; i < m; ++i) {
    const int oi = observations[i];
    if (oi < 0 || oi >= dim) throw std::invalid_argument("mmse: observation index out of range");
    sot(i) = joint.sigma(oi, target);
    for (int j = 0; j < m; ++j) soo(i, j) = joint.sigma(oi, observations[j]);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(soo);
  const Eigen::VectorXd& evals = es.eigenvalues();
  const double lmax = evals.cwiseMax(0.0).maxCoeff();
  const double threshold = kPinvRelThreshold * lmax;

  Eigen::VectorXd inv = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i)
    if (evals(i) > threshold && evals(i) > 0.0) inv(i) = 1.0 / evals(i);
  res.gains = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose() * sot;

  res.predicted_variance = res.gains.dot(soo * res.gains);
  res.residual_variance = std::max(0.0, prior - res.predicted_variance);
  return res;
}

ReceiverPolicy receiver_best_response(const JointCovariance& joint) {
  const int n = joint.horizon;
  ReceiverPolicy rp(n);
  std::vector<int> obs;
  obs.reserve(n);
  for (int k = 0; k < n; ++k) {
    obs.push_back(joint.y_index(k));
    const MmseResult r = mmse(joint, joint.x_index(k), obs);
    for (int j = 0; j <= k; ++j) rp.kappa[k][j] = r.gains(j);
  }
  return rp;
}

ReceiverPolicy receiver_best_response(const GameConfig& config, const SenderPolicy& policy) {
  return receiver_best_response(build_joint_covariance(config, policy));
}

namespace {

// E{(target_combo - sum_j kappa_j y_j)^2} as a quadratic form in the joint
// covariance; `weights` holds the +1 coefficients of the tracked variables.
double quadratic_residual(const JointCovariance& joint, const std::vector<int>& tracked,
                          const std::vector<double>& kappa_row, int upto_stage) {
  double value = 0.0;
  for (int a : tracked)
    for (int b : tracked) value += joint.sigma(a, b);
  for (int j = 0; j <= upto_stage; ++j) {
    double cross = 0.0;
    for (int a : tracked) cross += joint.sigma(a, joint.y_index(j));
    value -= 2.0 * kappa_row[j] * cross;
    for (int l = 0; l <= upto_stage; ++l)
      value += kappa_row[j] * kappa_row[l] * joint.sigma(joint.y_index(j), joint.y_index(l));
  }
  return value;
}

}  // namespace

std::vector<double> sender_stage_costs(const GameConfig& config, const SenderPolicy& policy,
                                       const ReceiverPolicy& receiver) {
  check_horizons(config, policy);
  if (receiver.horizon() != config.horizon)
    throw std::invalid_argument("receiver: horizon does not match config");
  const JointCovariance joint = build_joint_covariance(config, policy);
  std::vector<double> costs(config.horizon);
  for (int k = 0; k < config.horizon; ++k)
    costs[k] = quadratic_residual(joint, {joint.x_index(k), joint.theta_index(k)},
                                  receiver.kappa[k], k);
  return costs;
}

double sender_cost(const GameConfig& config, const SenderPolicy& policy,
                   const ReceiverPolicy& receiver) {
  double total = 0.0;
  for (double c : sender_stage_costs(config, policy, receiver)) total += c;
  return total;
}

double receiver_cost(const GameConfig& config, const SenderPolicy& policy,
                     const ReceiverPolicy& receiver) {
  check_horizons(config, policy);
  if (receiver.horizon() != config.horizon)
    throw std::invalid_argument("receiver: horizon does not match config");
  const JointCovariance joint = build_joint_covariance(config, policy);
  double total = 0.0;
  for (int k = 0; k < config.horizon; ++k)
    total += quadratic_residual(joint, {joint.x_index(k)}, receiver.kappa[k], k);
  return total;
}

std::vector<double> stackelberg_stage_costs(const GameConfig& config,
                                            const SenderPolicy& policy) {
  check_horizons(config, policy);
  const JointCovariance joint = build_joint_covariance(config, policy);
  const ReceiverPolicy receiver = receiver_best_response(joint);
  std::vector<double> costs(config.horizon);
  for (int k = 0; k < config.horizon; ++k)
    costs[k] = quadratic_residual(joint, {joint.x_index(k), joint.theta_index(k)},
                                  receiver.kappa[k], k);
  return costs;
}

double stackelberg_objective(const GameConfig& config, const SenderPolicy& policy) {
  double total = 0.0;
  for (double c : stackelberg_stage_costs(config, policy)) total += c;
  return total;
}

}  // namespace sigeq
