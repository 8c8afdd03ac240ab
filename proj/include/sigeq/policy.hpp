#pragma once

#include <vector>

namespace sigeq {

/// Memoryless per-stage signal coefficients: y_k = b·x_k + c·theta_k + d·z_k.
struct StagePolicy {
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

/// Lower-triangular linear sender policy over n stages:
///   y_k = sum_{j<=k} b[k][j]·x_j + c[k][j]·theta_j + d[k][j]·z_j
/// Stage and input indices are 0-based; row k holds k+1 coefficients.
struct SenderPolicy {
  std::vector<std::vector<double>> b, c, d;

  SenderPolicy() = default;
  explicit SenderPolicy(int horizon);

  /// Diagonal embedding of one StagePolicy per stage.
  static SenderPolicy memoryless(const std::vector<StagePolicy>& stages);

  int horizon() const { return static_cast<int>(b.size()); }
  bool is_memoryless() const;
  /// Diagonal coefficients as stage policies (off-diagonals ignored).
  std::vector<StagePolicy> diagonal() const;
  /// Multiplies every stage-k coefficient by alpha[k]. Leaves the signal
  /// sigma-algebra (and all best-response costs) unchanged for alpha != 0.
  SenderPolicy scaled(const std::vector<double>& alpha) const;

  bool all_finite() const;
};

/// Receiver gains: u_k = sum_{j<=k} kappa[k][j]·y_j, indices 0-based.
struct ReceiverPolicy {
  std::vector<std::vector<double>> kappa;

  ReceiverPolicy() = default;
  explicit ReceiverPolicy(int horizon);
  int horizon() const { return static_cast<int>(kappa.size()); }
};

/// Gauge-fixed representative of the policy's scaling-equivalence class:
/// each stage with b[k][k] != 0 is rescaled so b[k][k] = 1, then d entries
/// are made non-negative (z is symmetric). Idempotent.
SenderPolicy canonicalize_policy(const SenderPolicy& policy);

}  // namespace sigeq
