#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace possim {

struct DominanceReport {
  /// max over the grid of ECDF(alpha) - alpha.
  double max_violation = 0.0;
  double alpha_at_max = 0.0;
  bool pass = true;
};

/// Uniform grid 0, 1/(points-1), ..., 1.
std::vector<double> alpha_grid(std::size_t points = 1001);

/// Empirical CDF #{x <= alpha} / n at each grid level.
std::vector<double> empirical_cdf(std::span<const double> samples, std::span<const double> grid);

/// Checks that values in [0, 1] are stochastically no smaller than
/// Unif(0, 1) on a 1001-point grid: pass iff max(ECDF - alpha) <= tolerance.
DominanceReport dominance_check(std::span<const double> samples, double tolerance);

/// Dvoretzky-Kiefer-Wolfowitz half-width sqrt(ln(2/delta) / (2n)).
double dkw_band(std::size_t n, double delta = 0.01);

/// Kolmogorov distance between the sample and Unif(0, 1).
double ks_distance_uniform(std::span<const double> samples);

}  // namespace possim
