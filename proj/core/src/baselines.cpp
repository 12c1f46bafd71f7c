#include "possim/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "possim/error.hpp"
#include "possim/numerics.hpp"

namespace possim {

namespace {

double solve_u_1d(const Association& assoc, const DataRecord& y, double theta) {
  const auto us = assoc.solve_u(y, std::span<const double>(&theta, 1));
  if (us.empty()) throw DomainError("association has no solution at this parameter value");
  return us.front().at(0);
}

void require_scalar(const Association& assoc) {
  if (!assoc.has_solve_theta()) throw ArgumentError("association must be solvable for theta");
  if (!is_interval(assoc.param_domain) || assoc.aux.dim() != 1) {
    throw UnsupportedError("fiducial baselines need a scalar parameter and auxiliary variable");
  }
}

double solve_theta_1d(const Association& assoc, const DataRecord& y, double u) {
  return assoc.solve_theta(y, std::span<const double>(&u, 1)).at(0);
}

}  // namespace

double association_jacobian(const Association& assoc, const DataRecord& y, double theta) {
  const double step = 1e-6 * std::max(1.0, std::abs(theta));
  const Interval& d = as_interval(assoc.param_domain);
  double lo = theta - step;
  double hi = theta + step;
  if (!d.contains(lo)) lo = theta;
  if (!d.contains(hi)) hi = theta;
  if (!(hi > lo)) throw NumericError("Jacobian step leaves the parameter domain");
  const double j = std::abs((solve_u_1d(assoc, y, hi) - solve_u_1d(assoc, y, lo)) / (hi - lo));
  if (!std::isfinite(j)) throw NumericError("Jacobian is not finite");
  return j;
}

PossibilityContour fiducial_contour(const Association& assoc, const DataRecord& y, std::size_t budget,
                                    std::uint64_t seed) {
  require_scalar(assoc);
  if (budget == 0) throw ArgumentError("Monte Carlo budget must be positive");
  if (!assoc.aux.has_sampler()) throw ConfigurationError("auxiliary distribution has no sampler");
  RandomStream rng(seed);
  auto scores = std::make_shared<std::vector<double>>(budget);
  for (auto& s : *scores) {
    const double u = assoc.aux.sample_1d(rng);
    const double theta = solve_theta_1d(assoc, y, u);
    s = assoc.aux.density_at(u) * association_jacobian(assoc, y, theta);
    if (!std::isfinite(s)) throw NumericError("fiducial density is not finite at a sampled point");
  }
  std::sort(scores->begin(), scores->end());
  const auto table = std::shared_ptr<const std::vector<double>>(scores);
  auto eval = [assoc, y, table](double theta) {
    const double target = assoc.aux.density_at(solve_u_1d(assoc, y, theta)) * association_jacobian(assoc, y, theta);
    const auto it = std::lower_bound(table->begin(), table->end(), target);
    return static_cast<double>(it - table->begin()) / static_cast<double>(table->size());
  };
  auto c = PossibilityContour::on_interval(as_interval(assoc.param_domain), eval, ContourShape::general);
  MonteCarloInfo info;
  info.budget = budget;
  const auto top = std::lower_bound(table->begin(), table->end(), table->back());
  info.sup_estimate = static_cast<double>(top - table->begin()) / static_cast<double>(budget);
  info.normalization_violated = info.sup_estimate < 1.0 - 3.0 / std::sqrt(static_cast<double>(budget));
  c.set_monte_carlo(info);
  return c;
}

double fiducial_halfline_possibility(const Association& assoc, const DataRecord& y, double theta, std::size_t budget,
                                     std::uint64_t seed) {
  require_scalar(assoc);
  if (std::isinf(theta)) return theta < 0 ? 1.0 : 0.0;

  // Direction of theta_{y,u} in u, checked on sorted auxiliary draws.
  RandomStream probe(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<double> us(512);
  for (auto& u : us) u = assoc.aux.sample_1d(probe);
  std::sort(us.begin(), us.end());
  bool increasing = true;
  bool decreasing = true;
  double prev = solve_theta_1d(assoc, y, us.front());
  for (std::size_t k = 1; k < us.size(); ++k) {
    const double cur = solve_theta_1d(assoc, y, us[k]);
    if (cur < prev) increasing = false;
    if (cur > prev) decreasing = false;
    prev = cur;
  }
  if (!increasing && !decreasing) throw UnsupportedError("theta_{y,u} is not monotone in u");

  if (assoc.aux.has_cdf()) {
    const double u = solve_u_1d(assoc, y, theta);
    const double f = assoc.aux.cdf(u);
    return decreasing ? f : 1.0 - f;
  }
  if (budget == 0) throw ArgumentError("Monte Carlo budget must be positive");
  RandomStream rng(seed);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < budget; ++k) {
    if (solve_theta_1d(assoc, y, assoc.aux.sample_1d(rng)) >= theta) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(budget);
}

Interval curved_normal_fiducial_interval(const CurvedNormalConditional& conditional, const CurvedNormalReduction& r,
                                         double level, std::size_t budget, RandomStream& rng) {
  if (!(level > 0.0 && level < 1.0)) throw ArgumentError("level must lie in (0, 1)");
  if (budget < 2) throw ArgumentError("fiducial interval needs at least two draws");
  std::vector<double> thetas(budget);
  for (auto& t : thetas) t = r.y1 - r.y2 * conditional.sample(rng);
  std::sort(thetas.begin(), thetas.end());
  const double tail = 0.5 * (1.0 - level);
  return Interval::closed(numerics::sorted_quantile(thetas, tail), numerics::sorted_quantile(thetas, 1.0 - tail));
}

Interval curved_normal_fiducial_interval(const CurvedNormalModel& model, const CurvedNormalReduction& r,
                                         double level, std::size_t budget, std::uint64_t seed) {
  const CurvedNormalConditional conditional(model, r.h);
  RandomStream rng(seed);
  return curved_normal_fiducial_interval(conditional, r, level, budget, rng);
}

double eiv_flat_bayes_probability(const EivModel& model, const std::function<bool(double)>& a, std::size_t budget,
                                  RandomStream& rng, PositivityHandling positivity) {
  model.validate();
  if (budget == 0) throw ArgumentError("Monte Carlo budget must be positive");
  std::size_t accepted = 0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < budget; ++k) {
    const double theta1 = model.y1 - rng.exponential(model.lambda1);
    const double theta2 = model.y2 - rng.exponential(model.lambda2);
    if (positivity == PositivityHandling::reject_nonpositive && (theta1 <= 0.0 || theta2 <= 0.0)) continue;
    ++accepted;
    if (a(theta1 / theta2)) ++hits;
  }
  if (static_cast<double>(accepted) < 1e-4 * static_cast<double>(budget) || accepted == 0) {
    throw DegenerateDataError("flat-prior posterior has acceptance rate below 1e-4");
  }
  return static_cast<double>(hits) / static_cast<double>(accepted);
}

double eiv_flat_bayes_probability(const EivModel& model, const std::function<bool(double)>& a, std::size_t budget,
                                  std::uint64_t seed, PositivityHandling positivity) {
  RandomStream rng(seed);
  return eiv_flat_bayes_probability(model, a, budget, rng, positivity);
}

Association scale_association() {
  Association a;
  a.name = "exp-scale";
  a.aux = exponential_distribution(1.0);
  a.param_domain = Interval{0.0, kInf, true, true};
  a.solve_u = [](const DataRecord& y, std::span<const double> theta) {
    return std::vector<Point>{Point{y.at(0) / theta[0]}};
  };
  a.solve_theta = [](const DataRecord& y, std::span<const double> u) { return Point{y.at(0) / u[0]}; };
  a.simulate = [](std::span<const double> theta, std::span<const double> u) { return DataRecord{theta[0] * u[0]}; };
  return a;
}

}  // namespace possim
