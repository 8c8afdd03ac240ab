#pragma once

#include <optional>
#include <string>

namespace sigeq {

/// Scalar game primitives: two AR(1) processes (state x, bias theta), their
/// initial second moments, and the stage count.
///
/// Innovation variances may be omitted; for stationary configs they are
/// derived by validate_config from sigma² = a²·sigma² + sigma_noise².
struct GameConfig {
  int horizon = 1;
  double a_x = 0.0;
  double a_theta = 0.0;
  double sigma_x2 = 1.0;
  double sigma_theta2 = 1.0;
  double rho = 0.0;  // E{x_1 theta_1}
  std::optional<double> sigma_w2;
  std::optional<double> sigma_v2;
  bool stationary = true;

  /// State innovation variance; only valid on a validated config.
  double w2() const;
  /// Bias innovation variance; only valid on a validated config.
  double v2() const;
};

/// Checks all GameConfig invariants and fills in innovation variances for
/// stationary configs. Throws std::invalid_argument with a field-path
/// message on the first violated constraint. Idempotent.
GameConfig validate_config(const GameConfig& raw);

/// Stationary config with innovation variances derived. rho defaults to 0.
GameConfig make_stationary(int horizon, double a_x, double a_theta,
                           double sigma_x2 = 1.0, double sigma_theta2 = 1.0,
                           double rho = 0.0);

}  // namespace sigeq
