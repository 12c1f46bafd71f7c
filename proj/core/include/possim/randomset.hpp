#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "possim/association.hpp"
#include "possim/distribution.hpp"
#include "possim/random.hpp"

namespace possim {

/// Nested random set S = {u : r(u) >= r(U~)} with U~ drawn from a 1-D
/// auxiliary distribution and r a ranking function, by default its density.
///
/// Sets are never materialized: each draw is kept as its threshold, scaled
/// by r at the mode so that thresholds lie in [0, 1].
class NestedRandomSetSampler {
 public:
  using Rank = std::function<double(double)>;

  explicit NestedRandomSetSampler(AuxiliaryDistribution dist);
  NestedRandomSetSampler(AuxiliaryDistribution dist, Rank rank, double mode);

  struct NestedSet {
    double threshold = 0.0;
    std::function<bool(double)> contains;
    /// Explicit endpoints when the ranking is unimodal in u.
    std::optional<Interval> interval;
  };

  const AuxiliaryDistribution& distribution() const { return dist_; }
  double mode() const { return mode_; }
  /// r(u) / r(mode).
  double scaled_rank(double u) const;

  /// The set generated by a given U~.
  NestedSet set_for(double u_tilde) const;
  NestedSet sample(RandomStream& rng) const;

  double draw_threshold(RandomStream& rng) const;
  /// `budget` thresholds from the given seed, sorted ascending.
  std::vector<double> draw_thresholds(std::size_t budget, std::uint64_t seed) const;

 private:
  Interval upper_level_interval(double threshold) const;

  AuxiliaryDistribution dist_;
  Rank rank_;
  double mode_ = 0.0;
  double peak_ = 1.0;
};

NestedRandomSetSampler::NestedSet sample_nested_set(const NestedRandomSetSampler& sampler, RandomStream& rng);

/// Monte Carlo P(S contains u) = P{r(U~) <= r(u)} over sorted thresholds.
double hitting_probability(const NestedRandomSetSampler& sampler, double u, std::span<const double> thresholds);
double hitting_probability(const NestedRandomSetSampler& sampler, double u, std::size_t budget,
                           std::uint64_t seed = 1);

/// Binomial standard error sqrt(p (1 - p) / n).
double mc_standard_error(double p, std::size_t n);

struct RandomSetEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  /// Draws for which Theta_y(S) = {theta : u_{y,theta} in S} is empty.
  std::size_t empty_count = 0;
  /// Draws with a nonempty Theta_y(S); the estimate conditions on these.
  std::size_t used = 0;
};

/// P{Theta_y(S) meets A | Theta_y(S) nonempty}. A draw hits A iff the
/// supremum over A of r(u_{y,theta}) reaches its threshold; the supremum is
/// taken with the same machinery as posterior possibilities, guided by `hints`.
RandomSetEstimate randomset_plausibility(const NestedRandomSetSampler& sampler, const Association& assoc,
                                         const DataRecord& y, const SetDescriptor& a,
                                         std::span<const double> thresholds, const ContourHints& hints = {});
RandomSetEstimate randomset_plausibility(const NestedRandomSetSampler& sampler, const Association& assoc,
                                         const DataRecord& y, const SetDescriptor& a, std::size_t budget,
                                         std::uint64_t seed = 1, const ContourHints& hints = {});

/// 1 - plausibility of the complement of A within the parameter domain.
RandomSetEstimate randomset_belief(const NestedRandomSetSampler& sampler, const Association& assoc,
                                   const DataRecord& y, const SetDescriptor& a, std::span<const double> thresholds,
                                   const ContourHints& hints = {});

}  // namespace possim
