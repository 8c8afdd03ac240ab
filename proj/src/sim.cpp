#include "sigeq/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sigeq/parallel.hpp"
#include "sigeq/rng.hpp"

namespace sigeq {

namespace {

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

struct ChunkAccumulator {
  Kahan jt, jt2, jr, jr2;
  Eigen::MatrixXd moments;

  explicit ChunkAccumulator(int dim) { moments.setZero(dim, dim); }

  void merge(const ChunkAccumulator& other) {
    jt.add(other.jt.sum);
    jt2.add(other.jt2.sum);
    jr.add(other.jr.sum);
    jr2.add(other.jr2.sum);
    moments += other.moments;
  }
};

constexpr long long kChunk = 4096;  // fixed so chunk sums are scheduling-free

}  // namespace

SimReport sample_trajectories(const GameConfig& config, const SenderPolicy& policy,
                              const ReceiverPolicy& receiver, long long samples,
                              std::uint64_t seed, unsigned threads) {
  const GameConfig cfg = validate_config(config);
  const int n = cfg.horizon;
  if (policy.horizon() != n || receiver.horizon() != n)
    throw std::invalid_argument("sim: policy/receiver horizon must match config");
  if (samples < 1) throw std::invalid_argument("sim: samples must be >= 1");

  // Cholesky factor of the initial (x_1, theta_1) covariance.
  const double l11 = std::sqrt(cfg.sigma_x2);
  const double l21 = cfg.rho / l11;
  const double l22 = std::sqrt(std::max(0.0, cfg.sigma_theta2 - l21 * l21));
  const double sw = std::sqrt(cfg.w2());
  const double sv = std::sqrt(cfg.v2());

  const long long chunks = (samples + kChunk - 1) / kChunk;
  std::vector<ChunkAccumulator> acc(static_cast<std::size_t>(chunks), ChunkAccumulator(3 * n));

  parallel_for(static_cast<std::size_t>(chunks), threads, [&](std::size_t ci) {
    ChunkAccumulator& a = acc[ci];
    const long long begin = static_cast<long long>(ci) * kChunk;
    const long long end = std::min(samples, begin + kChunk);
    std::vector<double> x(n), th(n), y(n);
    Eigen::VectorXd v(3 * n);
    for (long long i = begin; i < end; ++i) {
      CounterRng rng(seed, static_cast<std::uint64_t>(i));
      const double g1 = rng.next_normal();
      const double g2 = rng.next_normal();
      x[0] = l11 * g1;
      th[0] = l21 * g1 + l22 * g2;
      for (int k = 1; k < n; ++k) {
        x[k] = cfg.a_x * x[k - 1] + sw * rng.next_normal();
        th[k] = cfg.a_theta * th[k - 1] + sv * rng.next_normal();
      }
      std::vector<double> z(n);
      for (int k = 0; k < n; ++k) z[k] = rng.next_normal();
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int j = 0; j <= k; ++j)
          s += policy.b[k][j] * x[j] + policy.c[k][j] * th[j] + policy.d[k][j] * z[j];
        y[k] = s;
      }
      double jt = 0.0, jr = 0.0;
      for (int k = 0; k < n; ++k) {
        double u = 0.0;
        for (int j = 0; j <= k; ++j) u += receiver.kappa[k][j] * y[j];
        const double et = x[k] + th[k] - u;
        const double er = x[k] - u;
        jt += et * et;
        jr += er * er;
      }
      a.jt.add(jt);
      a.jt2.add(jt * jt);
      a.jr.add(jr);
      a.jr2.add(jr * jr);
      for (int k = 0; k < n; ++k) {
        v(k) = x[k];
        v(n + k) = th[k];
        v(2 * n + k) = y[k];
      }
      a.moments.noalias() += v * v.transpose();
    }
  });

  ChunkAccumulator total(3 * n);
  for (const auto& a : acc) total.merge(a);  // fixed order: deterministic

  SimReport report;
  report.samples = samples;
  report.seed = seed;
  const double inv = 1.0 / static_cast<double>(samples);
  report.jt_mean = total.jt.sum * inv;
  report.jr_mean = total.jr.sum * inv;
  const double bessel =
      samples > 1 ? static_cast<double>(samples) / static_cast<double>(samples - 1) : 1.0;
  const double jt_var = std::max(0.0, (total.jt2.sum * inv - report.jt_mean * report.jt_mean)) * bessel;
  const double jr_var = std::max(0.0, (total.jr2.sum * inv - report.jr_mean * report.jr_mean)) * bessel;
  report.jt_se = std::sqrt(jt_var * inv);
  report.jr_se = std::sqrt(jr_var * inv);
  report.second_moments = total.moments * inv;
  return report;
}

}  // namespace sigeq
