#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "possim/random.hpp"
#include "possim/space.hpp"

namespace possim {

/// Distribution of an auxiliary variable: density, optional CDF (1-D only),
/// optional sampler, and a support descriptor.
struct AuxiliaryDistribution {
  using Density = std::function<double(std::span<const double>)>;
  using Cdf = std::function<double(double)>;
  using Sampler = std::function<void(RandomStream&, std::span<double>)>;

  std::string name;
  SpaceDescriptor support = Interval::real_line();
  Density density;
  Cdf cdf;
  Sampler sampler;
  /// Point where the density peaks, when known.
  std::optional<Point> mode;
  /// Center of symmetry for 1-D symmetric unimodal densities.
  std::optional<double> symmetry_center;

  std::size_t dim() const { return dimension(support); }
  bool has_cdf() const { return static_cast<bool>(cdf); }
  bool has_sampler() const { return static_cast<bool>(sampler); }

  double density_at(double u) const { return density(std::span<const double>(&u, 1)); }
  double sample_1d(RandomStream& rng) const;
};

AuxiliaryDistribution normal_distribution(double mean = 0.0, double sd = 1.0);
AuxiliaryDistribution cauchy_distribution(double location = 0.0, double scale = 1.0);
AuxiliaryDistribution uniform_distribution(double lo = 0.0, double hi = 1.0);
AuxiliaryDistribution exponential_distribution(double rate = 1.0);

double standard_normal_cdf(double x);
/// Standard Cauchy CDF via the arctangent closed form.
double standard_cauchy_cdf(double x);

}  // namespace possim
