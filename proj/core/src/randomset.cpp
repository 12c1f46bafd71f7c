#include "possim/randomset.hpp"

#include <algorithm>
#include <cmath>

#include "possim/error.hpp"
#include "possim/measure.hpp"
#include "possim/numerics.hpp"

namespace possim {

namespace {

double default_mode(const AuxiliaryDistribution& dist) {
  if (dist.mode && dist.mode->size() == 1) return dist.mode->front();
  throw ArgumentError("distribution '" + dist.name + "' has no mode; pass a ranking function and its mode");
}

double count_at_most(std::span<const double> sorted, double x) {
  return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
}

}  // namespace

NestedRandomSetSampler::NestedRandomSetSampler(AuxiliaryDistribution dist)
    : NestedRandomSetSampler(dist, [density = dist.density](double u) {
        return density(std::span<const double>(&u, 1));
      }, default_mode(dist)) {}

NestedRandomSetSampler::NestedRandomSetSampler(AuxiliaryDistribution dist, Rank rank, double mode)
    : dist_(std::move(dist)), rank_(std::move(rank)), mode_(mode) {
  if (dist_.dim() != 1) throw UnsupportedError("nested random sets are built on 1-D auxiliary spaces");
  if (!dist_.has_sampler()) throw ConfigurationError("distribution '" + dist_.name + "' has no sampler");
  peak_ = rank_(mode_);
  if (!(peak_ > 0.0) || !std::isfinite(peak_)) throw ArgumentError("ranking function must be positive at the mode");
}

double NestedRandomSetSampler::scaled_rank(double u) const {
  const double r = rank_(u);
  return std::isfinite(r) ? std::clamp(r / peak_, 0.0, 1.0) : 0.0;
}

Interval NestedRandomSetSampler::upper_level_interval(double threshold) const {
  const Interval support = as_interval(dist_.support);
  auto inside = [&](double u) { return support.contains(u) && scaled_rank(u) >= threshold; };
  auto endpoint = [&](double dir) {
    const double bound = dir > 0 ? support.hi : support.lo;
    double outside = mode_;
    for (double step = 1.0; step < 1e12; step *= 2.0) {
      outside = mode_ + dir * step;
      if (!inside(outside)) break;
    }
    if (inside(outside)) return bound;
    if (std::isfinite(bound) && inside(bound)) return bound;
    return numerics::bisect_boundary(inside, mode_, outside, 1e-12 * (1.0 + std::abs(outside)));
  };
  return Interval::closed(endpoint(-1.0), endpoint(+1.0));
}

NestedRandomSetSampler::NestedSet NestedRandomSetSampler::set_for(double u_tilde) const {
  NestedSet s;
  s.threshold = scaled_rank(u_tilde);
  const double t = s.threshold;
  s.contains = [this, t](double u) { return scaled_rank(u) >= t; };
  s.interval = upper_level_interval(t);
  return s;
}

NestedRandomSetSampler::NestedSet NestedRandomSetSampler::sample(RandomStream& rng) const {
  return set_for(dist_.sample_1d(rng));
}

double NestedRandomSetSampler::draw_threshold(RandomStream& rng) const { return scaled_rank(dist_.sample_1d(rng)); }

std::vector<double> NestedRandomSetSampler::draw_thresholds(std::size_t budget, std::uint64_t seed) const {
  if (budget == 0) throw ArgumentError("Monte Carlo budget must be positive");
  RandomStream rng(seed);
  std::vector<double> out(budget);
  for (auto& t : out) t = draw_threshold(rng);
  std::sort(out.begin(), out.end());
  return out;
}

NestedRandomSetSampler::NestedSet sample_nested_set(const NestedRandomSetSampler& sampler, RandomStream& rng) {
  return sampler.sample(rng);
}

double hitting_probability(const NestedRandomSetSampler& sampler, double u, std::span<const double> thresholds) {
  if (thresholds.empty()) throw ArgumentError("no thresholds");
  return count_at_most(thresholds, sampler.scaled_rank(u)) / static_cast<double>(thresholds.size());
}

double hitting_probability(const NestedRandomSetSampler& sampler, double u, std::size_t budget, std::uint64_t seed) {
  const auto t = sampler.draw_thresholds(budget, seed);
  return hitting_probability(sampler, u, t);
}

double mc_standard_error(double p, std::size_t n) {
  if (n == 0) return 0.0;
  const double q = std::clamp(p, 0.0, 1.0);
  return std::sqrt(q * (1.0 - q) / static_cast<double>(n));
}

RandomSetEstimate randomset_plausibility(const NestedRandomSetSampler& sampler, const Association& assoc,
                                         const DataRecord& y, const SetDescriptor& a,
                                         std::span<const double> thresholds, const ContourHints& hints) {
  if (thresholds.empty()) throw ArgumentError("no thresholds");
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) throw ArgumentError("thresholds must be sorted");
  std::optional<Point> mode;
  if (hints.mode) mode = Point{*hints.mode};
  // theta -> r(u_{y,theta}) / r(mode): a draw with threshold t meets A iff its sup over A is >= t.
  PossibilityContour reach(
      assoc.param_domain,
      [&](std::span<const double> theta) {
        const auto us = assoc.solve_u(y, theta);
        double best = 0.0;
        for (const auto& u : us) best = std::max(best, sampler.scaled_rank(u.at(0)));
        return best;
      },
      hints.shape, mode);
  if (hints.scale) reach.set_scale(*hints.scale);

  const double s_full = eval_possibility(reach, IntervalUnion{as_interval(assoc.param_domain)});
  const double s_a = eval_possibility(reach, a);
  const double n = static_cast<double>(thresholds.size());
  const double nonempty = count_at_most(thresholds, s_full);
  RandomSetEstimate out;
  out.empty_count = static_cast<std::size_t>(n - nonempty);
  out.used = static_cast<std::size_t>(nonempty);
  if (out.used == 0) return out;
  out.value = count_at_most(thresholds, std::min(s_a, s_full)) / nonempty;
  out.standard_error = mc_standard_error(out.value, out.used);
  return out;
}

RandomSetEstimate randomset_plausibility(const NestedRandomSetSampler& sampler, const Association& assoc,
                                         const DataRecord& y, const SetDescriptor& a, std::size_t budget,
                                         std::uint64_t seed, const ContourHints& hints) {
  const auto t = sampler.draw_thresholds(budget, seed);
  return randomset_plausibility(sampler, assoc, y, a, t, hints);
}

RandomSetEstimate randomset_belief(const NestedRandomSetSampler& sampler, const Association& assoc,
                                   const DataRecord& y, const SetDescriptor& a, std::span<const double> thresholds,
                                   const ContourHints& hints) {
  RandomSetEstimate out =
      randomset_plausibility(sampler, assoc, y, complement(a, assoc.param_domain), thresholds, hints);
  out.value = 1.0 - out.value;
  return out;
}

}  // namespace possim
