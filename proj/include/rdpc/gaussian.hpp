#pragma once

#include <vector>

namespace rdpc::gaussian {

/// One point on the quadratic-Gaussian tradeoff surface for a standard
/// Normal source under mean-squared error.
struct GaussianPoint {
  double delta;       ///< distortion, in (0, 2]
  double common_rate; ///< common-randomness rate; +infinity allowed
  double rho;         ///< correlation E[XU], in [0, 1)
  double rho_tilde;   ///< correlation E[UY]; 1 when common_rate is infinite
  double rate;        ///< coding rate in bits
};

/// Solves 1 - delta/2 = rho * sqrt(1 - 2^(-2 rc) (1 - rho^2)) for the
/// unique root in [0, 1). rc may be +infinity (the 2^(-2 rc) factor is
/// then exactly 0). Throws std::domain_error unless 0 < delta <= 2.
double solve_rho(double delta, double common_rate);

/// rho_tilde = sqrt(1 - 2^(-2 rc) (1 - rho^2)); equals 1 at rc = +infinity.
double rho_tilde(double rho, double common_rate);

/// Minimum coding rate in bits at distortion delta with common-randomness
/// budget rc: R = 1/2 log2(1 / (1 - rho^2)).
double rate(double delta, double common_rate);

/// Closed form at rc = 0: R = 1/2 log2(2 / delta).
double rate_rc_zero(double delta);

/// Closed form at rc -> infinity: R = 1/2 log2(1 / (delta (1 - delta/4))).
double rate_rc_inf(double delta);

/// Classical rate-distortion function of a standard Normal source with no
/// realism constraint: R = 1/2 log2(1 / delta) for delta <= 1, else 0.
double rate_classical(double delta);

/// Evaluates the tradeoff on a distortion grid.
std::vector<GaussianPoint> curve(const std::vector<double>& delta_grid, double common_rate);

}  // namespace rdpc::gaussian
