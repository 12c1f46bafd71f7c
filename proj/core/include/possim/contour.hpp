#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "possim/distribution.hpp"
#include "possim/space.hpp"

namespace possim {

enum class ContourShape { unimodal, monotone, general };

/// Default distance beyond the last finite feature at which a contour is
/// taken to have reached its boundary limit.
inline constexpr double kDefaultHorizon = 1e6;

/// Monte Carlo provenance of an estimated contour.
struct MonteCarloInfo {
  std::size_t budget = 0;
  /// Estimate of sup_u pi(u) from the draws; well below 1 flags a ranking
  /// function that cannot produce a normalized contour.
  double sup_estimate = 1.0;
  bool normalization_violated = false;
};

/// A possibility contour: an evaluable map from a space into [0, 1] whose
/// supremum is 1, plus hints that let measures and cuts be computed exactly.
class PossibilityContour {
 public:
  using Eval = std::function<double(std::span<const double>)>;
  using Eval1d = std::function<double(double)>;

  PossibilityContour(SpaceDescriptor domain, Eval eval, ContourShape shape = ContourShape::general,
                     std::optional<Point> mode = std::nullopt);

  /// Contour on a one-dimensional interval.
  static PossibilityContour on_interval(Interval domain, Eval1d eval, ContourShape shape,
                                        std::optional<double> mode = std::nullopt);

  double operator()(double u) const;
  double operator()(std::span<const double> u) const { return eval_(u); }

  const SpaceDescriptor& domain() const { return domain_; }
  ContourShape shape() const { return shape_; }
  const std::optional<Point>& mode_hint() const { return mode_; }
  std::optional<double> mode_1d() const;

  /// Characteristic length used when scanning unbounded domains.
  double scale() const { return scale_; }
  double horizon() const { return horizon_; }
  PossibilityContour& set_scale(double scale);
  PossibilityContour& set_horizon(double horizon);

  const std::optional<MonteCarloInfo>& monte_carlo() const { return monte_carlo_; }
  PossibilityContour& set_monte_carlo(MonteCarloInfo info);
  /// Binomial standard error of the Monte Carlo estimate at u; 0 for exact contours.
  double standard_error(double u) const;

 private:
  SpaceDescriptor domain_;
  Eval eval_;
  Eval1d eval1d_;
  ContourShape shape_;
  std::optional<Point> mode_;
  double scale_ = 1.0;
  double horizon_ = kDefaultHorizon;
  std::optional<MonteCarloInfo> monte_carlo_;
};

enum class BuildMethod { closed_form, quadrature, monte_carlo };

/// Maximum-specificity contour pi(u) = P{f(U) < f(u)} of `dist`.
///
/// closed_form needs a 1-D symmetric unimodal density with a CDF and uses
/// pi(u) = 2 (1 - F(m + |u - m|)). quadrature integrates the density over
/// the sub-level set {w : f(w) < f(u)}. monte_carlo ranks `budget` draws and
/// works in any dimension. `rng_seed` seeds the Monte Carlo draws.
PossibilityContour build_max_specificity(const AuxiliaryDistribution& dist, BuildMethod method,
                                         std::size_t budget = 100000, std::uint64_t rng_seed = 1);

/// Contour pi(u) = P{h(U) < h(u)} estimated from `budget` draws of `dist`.
PossibilityContour build_ranked(const AuxiliaryDistribution& dist,
                                std::function<double(std::span<const double>)> h, std::size_t budget,
                                std::uint64_t rng_seed = 1);

/// Triangular contour 1 - |2u - 1| on [0, 1].
PossibilityContour build_triangular();

/// Grid tabulation of a 1-D contour with linear interpolation between nodes.
class TabulatedContour {
 public:
  TabulatedContour(const PossibilityContour& contour, double lo, double hi, std::size_t points);
  TabulatedContour(std::vector<double> grid, std::vector<double> values);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator()(double u) const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

}  // namespace possim
