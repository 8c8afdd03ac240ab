#include "sigeq/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace sigeq {

namespace {

std::vector<std::vector<double>> triangular(int n) {
  std::vector<std::vector<double>> rows(n);
  for (int k = 0; k < n; ++k) rows[k].assign(k + 1, 0.0);
  return rows;
}

}  // namespace

SenderPolicy::SenderPolicy(int horizon)
    : b(triangular(horizon)), c(triangular(horizon)), d(triangular(horizon)) {}

SenderPolicy SenderPolicy::memoryless(const std::vector<StagePolicy>& stages) {
  SenderPolicy p(static_cast<int>(stages.size()));
  for (int k = 0; k < p.horizon(); ++k) {
    p.b[k][k] = stages[k].b;
    p.c[k][k] = stages[k].c;
    p.d[k][k] = stages[k].d;
  }
  return p;
}

bool SenderPolicy::is_memoryless() const {
  for (int k = 0; k < horizon(); ++k)
    for (int j = 0; j < k; ++j)
      if (b[k][j] != 0.0 || c[k][j] != 0.0 || d[k][j] != 0.0) return false;
  return true;
}

std::vector<StagePolicy> SenderPolicy::diagonal() const {
  std::vector<StagePolicy> stages(horizon());
  for (int k = 0; k < horizon(); ++k) stages[k] = {b[k][k], c[k][k], d[k][k]};
  return stages;
}

SenderPolicy SenderPolicy::scaled(const std::vector<double>& alpha) const {
  if (static_cast<int>(alpha.size()) != horizon())
    throw std::invalid_argument("policy.scaled: alpha length must equal horizon");
  SenderPolicy out = *this;
  for (int k = 0; k < horizon(); ++k)
    for (int j = 0; j <= k; ++j) {
      out.b[k][j] *= alpha[k];
      out.c[k][j] *= alpha[k];
      out.d[k][j] *= alpha[k];
    }
  return out;
}

bool SenderPolicy::all_finite() const {
  for (int k = 0; k < horizon(); ++k)
    for (int j = 0; j <= k; ++j)
      if (!std::isfinite(b[k][j]) || !std::isfinite(c[k][j]) || !std::isfinite(d[k][j]))
        return false;
  return true;
}

ReceiverPolicy::ReceiverPolicy(int horizon) : kappa(triangular(horizon)) {}

SenderPolicy canonicalize_policy(const SenderPolicy& policy) {
  if (!policy.all_finite())
    throw std::invalid_argument("policy: coefficients must be finite");
  SenderPolicy out = policy;
  for (int k = 0; k < out.horizon(); ++k) {
    const double lead = out.b[k][k];
    if (lead != 0.0) {
      for (int j = 0; j <= k; ++j) {
        out.b[k][j] /= lead;
        out.c[k][j] /= lead;
        out.d[k][j] /= lead;
      }
      out.b[k][k] = 1.0;
    }
    for (int j = 0; j <= k; ++j) out.d[k][j] = std::abs(out.d[k][j]);
  }
  return out;
}

}  // namespace sigeq
