#include "possim/dominance.hpp"

#include <algorithm>
#include <cmath>

#include "possim/error.hpp"

namespace possim {

namespace {

std::vector<double> checked_sorted(std::span<const double> samples) {
  if (samples.empty()) throw ArgumentError("sample list is empty");
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double x : sorted) {
    if (!(x >= 0.0 && x <= 1.0)) throw DataError("sample value outside [0, 1]");
  }
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

}  // namespace

std::vector<double> alpha_grid(std::size_t points) {
  if (points < 2) throw ArgumentError("alpha grid needs at least two points");
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) grid[k] = static_cast<double>(k) / static_cast<double>(points - 1);
  return grid;
}

std::vector<double> empirical_cdf(std::span<const double> samples, std::span<const double> grid) {
  const std::vector<double> sorted = checked_sorted(samples);
  const double n = static_cast<double>(sorted.size());
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), grid[k]);
    out[k] = static_cast<double>(it - sorted.begin()) / n;
  }
  return out;
}

DominanceReport dominance_check(std::span<const double> samples, double tolerance) {
  const std::vector<double> grid = alpha_grid();
  const std::vector<double> cdf = empirical_cdf(samples, grid);
  DominanceReport report;
  report.max_violation = -1.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double v = cdf[k] - grid[k];
    if (v > report.max_violation) {
      report.max_violation = v;
      report.alpha_at_max = grid[k];
    }
  }
  report.pass = report.max_violation <= tolerance;
  return report;
}

double dkw_band(std::size_t n, double delta) {
  if (n == 0) throw ArgumentError("DKW band needs at least one sample");
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("delta must lie in (0, 1)");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

double ks_distance_uniform(std::span<const double> samples) {
  const std::vector<double> sorted = checked_sorted(samples);
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double x = sorted[i];
    d = std::max({d, static_cast<double>(i + 1) / n - x, x - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace possim
