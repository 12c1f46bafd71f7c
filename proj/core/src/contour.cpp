#include "possim/contour.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "possim/error.hpp"
#include "possim/numerics.hpp"

namespace possim {

PossibilityContour::PossibilityContour(SpaceDescriptor domain, Eval eval, ContourShape shape,
                                       std::optional<Point> mode)
    : domain_(std::move(domain)), eval_(std::move(eval)), shape_(shape), mode_(std::move(mode)) {
  if (!eval_) throw ArgumentError("contour needs an evaluation function");
}

PossibilityContour PossibilityContour::on_interval(Interval domain, Eval1d eval, ContourShape shape,
                                                   std::optional<double> mode) {
  if (!eval) throw ArgumentError("contour needs an evaluation function");
  std::optional<Point> m;
  if (mode) m = Point{*mode};
  PossibilityContour c(
      domain, [eval](std::span<const double> u) { return eval(u[0]); }, shape, std::move(m));
  c.eval1d_ = std::move(eval);
  return c;
}

double PossibilityContour::operator()(double u) const {
  if (eval1d_) return eval1d_(u);
  return eval_(std::span<const double>(&u, 1));
}

std::optional<double> PossibilityContour::mode_1d() const {
  if (!mode_ || mode_->size() != 1) return std::nullopt;
  return mode_->front();
}

PossibilityContour& PossibilityContour::set_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ArgumentError("contour scale must be positive");
  scale_ = scale;
  return *this;
}

PossibilityContour& PossibilityContour::set_horizon(double horizon) {
  if (!(horizon > 0.0)) throw ArgumentError("contour horizon must be positive");
  horizon_ = horizon;
  return *this;
}

PossibilityContour& PossibilityContour::set_monte_carlo(MonteCarloInfo info) {
  monte_carlo_ = info;
  return *this;
}

double PossibilityContour::standard_error(double u) const {
  if (!monte_carlo_ || monte_carlo_->budget == 0) return 0.0;
  const double p = std::clamp((*this)(u), 0.0, 1.0);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(monte_carlo_->budget));
}

namespace {

double center_of(const AuxiliaryDistribution& dist) {
  if (dist.mode && dist.mode->size() == 1) return dist.mode->front();
  if (dist.symmetry_center) return *dist.symmetry_center;
  const Interval& s = as_interval(dist.support);
  if (s.bounded()) return 0.5 * (s.lo + s.hi);
  if (std::isfinite(s.lo)) return s.lo + 1.0;
  if (std::isfinite(s.hi)) return s.hi - 1.0;
  return 0.0;
}

// Points spread over a 1-D support, used to detect flat densities.
std::vector<double> probe_points(const Interval& s, double center) {
  std::vector<double> out;
  if (s.bounded()) {
    for (int k = 1; k < 32; ++k) out.push_back(s.lo + (s.hi - s.lo) * k / 32.0);
    return out;
  }
  for (double d : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    for (double x : {center - d, center + d}) {
      if (s.contains(x)) out.push_back(x);
    }
  }
  return out;
}

void reject_flat(const AuxiliaryDistribution& dist) {
  std::vector<double> values;
  if (dist.dim() == 1) {
    for (double x : probe_points(as_interval(dist.support), center_of(dist))) values.push_back(dist.density_at(x));
  } else if (dist.has_sampler()) {
    RandomStream rng(0x5eedULL);
    Point u(dist.dim());
    for (int k = 0; k < 64; ++k) {
      dist.sampler(rng, u);
      values.push_back(dist.density(u));
    }
  }
  if (values.size() < 2) return;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*hi - *lo <= 1e-12 * std::abs(*hi)) {
    throw ArgumentError("density of '" + dist.name +
                        "' is constant, so P{f(U) < f(u)} is identically 0; use build_triangular instead");
  }
}

double scale_from_cdf(const AuxiliaryDistribution& dist, double m) {
  const double target = dist.cdf(m) + 0.25;
  if (target >= 1.0) return 1.0;
  double hi = 1.0;
  while (dist.cdf(m + hi) < target && hi < 1e12) hi *= 2.0;
  const double q = numerics::bisect_boundary([&](double d) { return dist.cdf(m + d) < target; }, 0.0, hi, 1e-6 * hi);
  return q > 0.0 ? q : 1.0;
}

PossibilityContour closed_form_contour(const AuxiliaryDistribution& dist) {
  if (dist.dim() != 1 || !dist.has_cdf() || !dist.symmetry_center || !dist.mode) {
    throw ArgumentError("closed_form needs a 1-D symmetric unimodal density with a CDF");
  }
  const double m = *dist.symmetry_center;
  auto cdf = dist.cdf;
  auto c = PossibilityContour::on_interval(
      as_interval(dist.support),
      [cdf, m](double u) { return std::clamp(2.0 * (1.0 - cdf(m + std::abs(u - m))), 0.0, 1.0); },
      ContourShape::unimodal, m);
  c.set_scale(scale_from_cdf(dist, m));
  return c;
}

// Maps the support onto a working coordinate in which the mass is well spread.
struct SupportMap {
  Interval t_support;
  std::function<double(double)> x_of_t;
  std::function<double(double)> t_of_x;
  std::function<double(double)> log_jacobian;
};

SupportMap support_map(const Interval& s, double center) {
  if (s.bounded()) {
    return {s, [](double t) { return t; }, [](double x) { return x; }, [](double) { return 0.0; }};
  }
  if (std::isfinite(s.lo)) {
    const double a = s.lo;
    return {Interval::real_line(), [a](double t) { return a + std::exp(t); },
            [a](double x) { return x > a ? std::log(x - a) : -kInf; }, [](double t) { return t; }};
  }
  if (std::isfinite(s.hi)) {
    const double b = s.hi;
    return {Interval::real_line(), [b](double t) { return b - std::exp(t); },
            [b](double x) { return x < b ? std::log(b - x) : -kInf; }, [](double t) { return t; }};
  }
  return {Interval::real_line(), [center](double t) { return center + std::sinh(t); },
          [center](double x) { return std::asinh(x - center); },
          [](double t) { return std::abs(t) + std::log1p(std::exp(-2.0 * std::abs(t))) - std::log(2.0); }};
}

PossibilityContour quadrature_contour(const AuxiliaryDistribution& dist) {
  if (dist.dim() != 1) throw ArgumentError("quadrature contours are 1-D only");
  const Interval support = as_interval(dist.support);
  const double center = center_of(dist);
  const SupportMap map = support_map(support, center);
  auto density = dist.density;
  auto log_density = [density, x_of_t = map.x_of_t](double t) {
    const double x = x_of_t(t);
    const double f = density(std::span<const double>(&x, 1));
    return f > 0.0 ? std::log(f) : -kInf;
  };
  double t_start = map.t_of_x(center);
  if (!std::isfinite(t_start)) t_start = 0.0;
  auto integrator = std::make_shared<const numerics::LevelSetIntegrator>(
      [log_density, lj = map.log_jacobian](double t) { return log_density(t) + lj(t); }, log_density,
      map.t_support, t_start);

  const bool unimodal = integrator->unimodal();
  const double mode = map.x_of_t(integrator->mode());
  auto c = PossibilityContour::on_interval(
      support,
      [integrator, density, support](double u) {
        if (!support.contains(u)) return 0.0;
        const double f = density(std::span<const double>(&u, 1));
        if (!(f > 0.0)) return 0.0;
        return integrator->mass_below(std::log(f));
      },
      unimodal ? ContourShape::unimodal : ContourShape::general, mode);
  const double q1 = map.x_of_t(integrator->quantile(0.25));
  const double q3 = map.x_of_t(integrator->quantile(0.75));
  if (q3 > q1) c.set_scale(0.5 * (q3 - q1));
  return c;
}

PossibilityContour sorted_rank_contour(SpaceDescriptor domain, std::vector<double> draws,
                                       std::function<double(std::span<const double>)> h, ContourShape shape,
                                       std::optional<Point> mode) {
  std::sort(draws.begin(), draws.end());
  const std::size_t n = draws.size();
  auto table = std::make_shared<const std::vector<double>>(std::move(draws));
  MonteCarloInfo info;
  info.budget = n;
  // Largest attainable estimate: fraction of draws strictly below the top one.
  const auto top = std::lower_bound(table->begin(), table->end(), table->back());
  info.sup_estimate = static_cast<double>(top - table->begin()) / static_cast<double>(n);
  info.normalization_violated = info.sup_estimate < 1.0 - 3.0 / std::sqrt(static_cast<double>(n));
  PossibilityContour c(
      std::move(domain),
      [table, h](std::span<const double> u) {
        const double v = h(u);
        if (std::isnan(v)) return 0.0;
        const auto it = std::lower_bound(table->begin(), table->end(), v);
        return static_cast<double>(it - table->begin()) / static_cast<double>(table->size());
      },
      shape, std::move(mode));
  c.set_monte_carlo(info);
  return c;
}

std::vector<double> ranked_draws(const AuxiliaryDistribution& dist,
                                 const std::function<double(std::span<const double>)>& h, std::size_t budget,
                                 std::uint64_t seed) {
  if (!dist.has_sampler()) throw ConfigurationError("distribution '" + dist.name + "' has no sampler");
  if (budget == 0) throw ArgumentError("Monte Carlo budget must be positive");
  RandomStream rng(seed);
  Point u(dist.dim());
  std::vector<double> values(budget);
  for (auto& v : values) {
    dist.sampler(rng, u);
    v = h(u);
    if (!std::isfinite(v)) throw NumericError("ranking function is not finite at a sampled point");
  }
  return values;
}

}  // namespace

PossibilityContour build_max_specificity(const AuxiliaryDistribution& dist, BuildMethod method,
                                         std::size_t budget, std::uint64_t rng_seed) {
  if (!dist.density) throw ArgumentError("distribution '" + dist.name + "' has no density");
  reject_flat(dist);
  switch (method) {
    case BuildMethod::closed_form:
      return closed_form_contour(dist);
    case BuildMethod::quadrature:
      return quadrature_contour(dist);
    case BuildMethod::monte_carlo: {
      auto f = dist.density;
      auto c = sorted_rank_contour(dist.support, ranked_draws(dist, f, budget, rng_seed), f,
                                   dist.dim() == 1 && dist.mode ? ContourShape::unimodal : ContourShape::general,
                                   dist.mode);
      return c;
    }
  }
  throw ArgumentError("unknown build method");
}

PossibilityContour build_ranked(const AuxiliaryDistribution& dist, std::function<double(std::span<const double>)> h,
                                std::size_t budget, std::uint64_t rng_seed) {
  if (!h) throw ArgumentError("ranking function is required");
  return sorted_rank_contour(dist.support, ranked_draws(dist, h, budget, rng_seed), h, ContourShape::general,
                             std::nullopt);
}

PossibilityContour build_triangular() {
  auto c = PossibilityContour::on_interval(
      Interval::closed(0.0, 1.0),
      [](double u) {
        if (!(u >= 0.0 && u <= 1.0)) return 0.0;
        return 1.0 - std::abs(2.0 * u - 1.0);
      },
      ContourShape::unimodal, 0.5);
  c.set_scale(0.25);
  return c;
}

TabulatedContour::TabulatedContour(const PossibilityContour& contour, double lo, double hi, std::size_t points) {
  if (points < 2 || !(hi > lo)) throw ArgumentError("tabulation needs at least two points on a nonempty range");
  grid_.resize(points);
  values_.resize(points);
  for (std::size_t k = 0; k < points; ++k) {
    grid_[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    values_[k] = contour(grid_[k]);
  }
}

TabulatedContour::TabulatedContour(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() != values_.size() || grid_.size() < 2) throw ArgumentError("grid and values must match");
  if (!std::is_sorted(grid_.begin(), grid_.end())) throw ArgumentError("tabulation grid must be sorted");
}

double TabulatedContour::operator()(double u) const {
  if (u <= grid_.front()) return values_.front();
  if (u >= grid_.back()) return values_.back();
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), u);
  const auto k = static_cast<std::size_t>(it - grid_.begin()) - 1;
  const double w = (u - grid_[k]) / (grid_[k + 1] - grid_[k]);
  return values_[k] + w * (values_[k + 1] - values_[k]);
}

}  // namespace possim
