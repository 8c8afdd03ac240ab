#include "sigeq/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sigeq/parallel.hpp"

namespace sigeq {

NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& start,
                             const NelderMeadOptions& options) {
  const int m = static_cast<int>(start.size());
  if (m < 1) throw std::invalid_argument("nelder_mead: dimension must be >= 1");
  const int max_iters = options.max_iters > 0 ? options.max_iters : 500 * m;

  std::vector<Eigen::VectorXd> simplex(m + 1, start);
  std::vector<double> fv(m + 1);
  for (int i = 0; i < m; ++i) {
    double step = options.initial_step;
    if (simplex[i + 1](i) != 0.0) step = std::max(step, 0.1 * std::abs(simplex[i + 1](i)));
    simplex[i + 1](i) += step;
  }
  for (int i = 0; i <= m; ++i) fv[i] = f(simplex[i]);

  std::vector<int> order(m + 1);
  NelderMeadResult result;
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = order[0], worst = order[m], second_worst = order[m - 1];

    const double frange = fv[worst] - fv[best];
    double xrange = 0.0;
    for (int i = 1; i <= m; ++i)
      xrange = std::max(xrange, (simplex[order[i]] - simplex[best]).lpNorm<Eigen::Infinity>());
    if (frange <= options.ftol * (std::abs(fv[best]) + options.ftol) || xrange <= options.xtol) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(m);
    for (int i = 0; i <= m; ++i)
      if (i != worst) centroid += simplex[i];
    centroid /= m;

    const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
    const double fr = f(reflected);
    if (fr < fv[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        fv[worst] = fe;
      } else {
        simplex[worst] = reflected;
        fv[worst] = fr;
      }
    } else if (fr < fv[second_worst]) {
      simplex[worst] = reflected;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      const Eigen::VectorXd contracted =
          outside ? centroid + 0.5 * (reflected - centroid) : centroid + 0.5 * (simplex[worst] - centroid);
      const double fc = f(contracted);
      if (fc < std::min(fr, fv[worst])) {
        simplex[worst] = contracted;
        fv[worst] = fc;
      } else {
        // shrink toward the best vertex
        for (int i = 0; i <= m; ++i) {
          if (i == best) continue;
          simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
          fv[i] = f(simplex[i]);
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= m; ++i)
    if (fv[i] < fv[best]) best = i;
  result.x = simplex[best];
  result.value = fv[best];
  result.iterations = iter;
  return result;
}

namespace {

// Additive-recurrence low-discrepancy sequence (generalized golden ratio).
std::vector<double> recurrence_alphas(int dim) {
  double g = 1.5;
  for (int i = 0; i < 64; ++i) g = std::pow(1.0 + g, 1.0 / (dim + 1));
  std::vector<double> alphas(dim);
  double a = 1.0;
  for (int i = 0; i < dim; ++i) {
    a /= g;
    alphas[i] = a;
  }
  return alphas;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

MultistartResult optimize_multistart(const Objective& f, const std::vector<double>& lo,
                                     const std::vector<double>& hi,
                                     const std::vector<Eigen::VectorXd>& warm_starts,
                                     const MultistartOptions& options) {
  const int m = static_cast<int>(lo.size());
  if (m < 1 || hi.size() != lo.size())
    throw std::invalid_argument("optimize_multistart: bad box");
  if (options.starts < 1) throw std::invalid_argument("optimize_multistart: starts must be >= 1");

  std::vector<Eigen::VectorXd> starts = warm_starts;
  const std::vector<double> alphas = recurrence_alphas(m);
  std::uint64_t state = options.seed;
  const double offset =
      static_cast<double>(splitmix64(state) >> 11) * (1.0 / 9007199254740992.0);
  for (int s = 0; s < options.starts; ++s) {
    Eigen::VectorXd x(m);
    for (int i = 0; i < m; ++i) {
      const double u = std::fmod(offset + (s + 1) * alphas[i], 1.0);
      x(i) = lo[i] + u * (hi[i] - lo[i]);
    }
    starts.push_back(std::move(x));
  }

  std::vector<NelderMeadResult> local(starts.size());
  parallel_for(starts.size(), options.threads,
               [&](std::size_t i) { local[i] = nelder_mead(f, starts[i], options.local); });

  MultistartResult result;
  result.starts = static_cast<int>(starts.size());
  double cmin = std::numeric_limits<double>::infinity();
  double cmax = -std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  for (std::size_t i = 0; i < local.size(); ++i) {
    if (local[i].converged) {
      ++result.converged_starts;
      cmin = std::min(cmin, local[i].value);
      cmax = std::max(cmax, local[i].value);
    }
    if (local[i].value < local[best].value) best = i;
  }
  result.spread = result.converged_starts > 0 ? cmax - cmin : 0.0;

  NelderMeadResult incumbent = local[best];
  for (int r = 0; r < options.polish_rounds; ++r) {
    NelderMeadOptions polish = options.local;
    polish.initial_step = 1e-3;
    NelderMeadResult refined = nelder_mead(f, incumbent.x, polish);
    if (refined.value < incumbent.value) incumbent = refined;
  }

  result.best_x = incumbent.x;
  result.best_value = incumbent.value;
  result.best_converged = incumbent.converged || local[best].converged;
  return result;
}

}  // namespace sigeq
