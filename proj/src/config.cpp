#include "sigeq/config.hpp"

#include <cmath>
#include <stdexcept>

namespace sigeq {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument("config." + msg);
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

double GameConfig::w2() const {
  if (!sigma_w2) throw std::logic_error("config.sigma_w2: unset; run validate_config first");
  return *sigma_w2;
}

double GameConfig::v2() const {
  if (!sigma_v2) throw std::logic_error("config.sigma_v2: unset; run validate_config first");
  return *sigma_v2;
}

GameConfig validate_config(const GameConfig& raw) {
  GameConfig cfg = raw;
  require(cfg.horizon >= 1, "horizon: must be >= 1");
  require(std::isfinite(cfg.a_x) && std::isfinite(cfg.a_theta), "a: must be finite");
  require(std::isfinite(cfg.sigma_x2) && cfg.sigma_x2 > 0.0, "sigma_x2: must be > 0");
  require(std::isfinite(cfg.sigma_theta2) && cfg.sigma_theta2 > 0.0, "sigma_theta2: must be > 0");
  require(std::isfinite(cfg.rho), "rho: must be finite");
  require(cfg.rho * cfg.rho <= cfg.sigma_x2 * cfg.sigma_theta2,
          "rho: correlation bound violated (rho^2 > sigma_x2*sigma_theta2)");

  if (cfg.stationary) {
    require(std::abs(cfg.a_x) < 1.0, "a_x: |a_x| must be < 1 when stationary");
    require(std::abs(cfg.a_theta) < 1.0, "a_theta: |a_theta| must be < 1 when stationary");
    const double w2 = (1.0 - cfg.a_x * cfg.a_x) * cfg.sigma_x2;
    const double v2 = (1.0 - cfg.a_theta * cfg.a_theta) * cfg.sigma_theta2;
    if (cfg.sigma_w2) {
      require(close_rel(*cfg.sigma_w2, w2, 1e-9),
              "sigma_w2: inconsistent with stationarity identity (1-a_x^2)*sigma_x2");
      cfg.sigma_w2 = w2;
    } else {
      cfg.sigma_w2 = w2;
    }
    if (cfg.sigma_v2) {
      require(close_rel(*cfg.sigma_v2, v2, 1e-9),
              "sigma_v2: inconsistent with stationarity identity (1-a_theta^2)*sigma_theta2");
      cfg.sigma_v2 = v2;
    } else {
      cfg.sigma_v2 = v2;
    }
  } else {
    require(cfg.sigma_w2.has_value(), "sigma_w2: required when stationary=false");
    require(cfg.sigma_v2.has_value(), "sigma_v2: required when stationary=false");
  }
  require(std::isfinite(*cfg.sigma_w2) && *cfg.sigma_w2 >= 0.0, "sigma_w2: must be >= 0");
  require(std::isfinite(*cfg.sigma_v2) && *cfg.sigma_v2 >= 0.0, "sigma_v2: must be >= 0");
  return cfg;
}

GameConfig make_stationary(int horizon, double a_x, double a_theta, double sigma_x2,
                           double sigma_theta2, double rho) {
  GameConfig cfg;
  cfg.horizon = horizon;
  cfg.a_x = a_x;
  cfg.a_theta = a_theta;
  cfg.sigma_x2 = sigma_x2;
  cfg.sigma_theta2 = sigma_theta2;
  cfg.rho = rho;
  cfg.stationary = true;
  return validate_config(cfg);
}

}  // namespace sigeq
