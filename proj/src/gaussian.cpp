#include "rdpc/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rdpc::gaussian {

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0) || delta > 2.0) {
    throw std::domain_error("gaussian: delta must lie in (0, 2]");
  }
}

void check_common_rate(double common_rate) {
  if (std::isnan(common_rate) || common_rate < 0.0) {
    throw std::domain_error("gaussian: common_rate must be nonnegative");
  }
}

// 2^(-2 rc), exactly 0 at rc = +infinity.
double randomness_factor(double common_rate) {
  return std::isinf(common_rate) ? 0.0 : std::exp2(-2.0 * common_rate);
}

}  // namespace

double solve_rho(double delta, double common_rate) {
  check_delta(delta);
  check_common_rate(common_rate);
  const double target = 1.0 - delta / 2.0;
  if (target == 0.0) return 0.0;
  const double c = randomness_factor(common_rate);
  const auto f = [&](double rho) {
    return rho * std::sqrt(1.0 - c * (1.0 - rho * rho)) - target;
  };
  // f is strictly increasing on [0, 1] with f(0) = -target <= 0 and
  // f(1) = delta/2 > 0; bisect to interval width 1e-14.
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 50 && hi - lo > 1e-14; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double rho_tilde(double rho, double common_rate) {
  check_common_rate(common_rate);
  const double c = randomness_factor(common_rate);
  return std::sqrt(1.0 - c * (1.0 - rho * rho));
}

double rate(double delta, double common_rate) {
  const double rho = solve_rho(delta, common_rate);
  return std::max(0.0, -0.5 * std::log2(1.0 - rho * rho));
}

double rate_rc_zero(double delta) {
  check_delta(delta);
  return 0.5 * std::log2(2.0 / delta);
}

double rate_rc_inf(double delta) {
  check_delta(delta);
  return 0.5 * std::log2(1.0 / (delta * (1.0 - delta / 4.0)));
}

double rate_classical(double delta) {
  if (!(delta > 0.0)) throw std::domain_error("gaussian: delta must be positive");
  if (delta >= 1.0) return 0.0;
  return 0.5 * std::log2(1.0 / delta);
}

std::vector<GaussianPoint> curve(const std::vector<double>& delta_grid, double common_rate) {
  std::vector<GaussianPoint> points;
  points.reserve(delta_grid.size());
  for (double delta : delta_grid) {
    const double rho = solve_rho(delta, common_rate);
    points.push_back({delta, common_rate, rho, rho_tilde(rho, common_rate),
                      std::max(0.0, -0.5 * std::log2(1.0 - rho * rho))});
  }
  return points;
}

}  // namespace rdpc::gaussian
