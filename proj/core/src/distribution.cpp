#include "possim/distribution.hpp"

#include <cmath>
#include <numbers>

#include "possim/error.hpp"

namespace possim {

double AuxiliaryDistribution::sample_1d(RandomStream& rng) const {
  if (!sampler) throw ConfigurationError(name + ": no sampler attached");
  double u = 0.0;
  sampler(rng, std::span<double>(&u, 1));
  return u;
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double standard_cauchy_cdf(double x) { return 0.5 + std::atan(x) / std::numbers::pi; }

AuxiliaryDistribution normal_distribution(double mean, double sd) {
  if (!(sd > 0.0)) throw ArgumentError("normal_distribution: sd must be positive");
  AuxiliaryDistribution d;
  d.name = "normal";
  d.support = Interval::real_line();
  const double norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
  d.density = [=](std::span<const double> u) {
    const double z = (u[0] - mean) / sd;
    return norm * std::exp(-0.5 * z * z);
  };
  d.cdf = [=](double x) { return standard_normal_cdf((x - mean) / sd); };
  d.sampler = [=](RandomStream& rng, std::span<double> out) { out[0] = mean + sd * rng.normal(); };
  d.mode = Point{mean};
  d.symmetry_center = mean;
  return d;
}

AuxiliaryDistribution cauchy_distribution(double location, double scale) {
  if (!(scale > 0.0)) throw ArgumentError("cauchy_distribution: scale must be positive");
  AuxiliaryDistribution d;
  d.name = "cauchy";
  d.support = Interval::real_line();
  d.density = [=](std::span<const double> u) {
    const double z = (u[0] - location) / scale;
    return 1.0 / (std::numbers::pi * scale * (1.0 + z * z));
  };
  d.cdf = [=](double x) { return standard_cauchy_cdf((x - location) / scale); };
  d.sampler = [=](RandomStream& rng, std::span<double> out) { out[0] = location + scale * rng.cauchy(); };
  d.mode = Point{location};
  d.symmetry_center = location;
  return d;
}

AuxiliaryDistribution uniform_distribution(double lo, double hi) {
  if (!(hi > lo)) throw ArgumentError("uniform_distribution: need lo < hi");
  AuxiliaryDistribution d;
  d.name = "uniform";
  d.support = Interval::closed(lo, hi);
  const double h = 1.0 / (hi - lo);
  d.density = [=](std::span<const double> u) { return (u[0] >= lo && u[0] <= hi) ? h : 0.0; };
  d.cdf = [=](double x) { return x <= lo ? 0.0 : (x >= hi ? 1.0 : (x - lo) * h); };
  d.sampler = [=](RandomStream& rng, std::span<double> out) { out[0] = lo + (hi - lo) * rng.uniform(); };
  d.symmetry_center = 0.5 * (lo + hi);
  return d;
}

AuxiliaryDistribution exponential_distribution(double rate) {
  if (!(rate > 0.0)) throw ArgumentError("exponential_distribution: rate must be positive");
  AuxiliaryDistribution d;
  d.name = "exponential";
  d.support = Interval{0.0, kInf, false, true};
  d.density = [=](std::span<const double> u) { return u[0] < 0.0 ? 0.0 : rate * std::exp(-rate * u[0]); };
  d.cdf = [=](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); };
  d.sampler = [=](RandomStream& rng, std::span<double> out) { out[0] = rng.exponential(rate); };
  d.mode = Point{0.0};
  return d;
}

}  // namespace possim
