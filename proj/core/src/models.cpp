#include "possim/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "possim/error.hpp"

namespace possim {

// ---------------------------------------------------------------- Cauchy

double cauchy_contour_value(double y, double theta) {
  // 2 (1 - F(t)) = (2 / pi) atan(1 / t), which keeps full precision in the tails.
  return 2.0 * std::atan2(1.0, std::abs(y - theta)) / std::numbers::pi;
}

Association cauchy_association() {
  Association a;
  a.name = "cauchy";
  a.aux = cauchy_distribution();
  a.param_domain = Interval::real_line();
  a.solve_u = [](const DataRecord& y, std::span<const double> theta) {
    return std::vector<Point>{Point{y.at(0) - theta[0]}};
  };
  a.solve_theta = [](const DataRecord& y, std::span<const double> u) { return Point{y.at(0) - u[0]}; };
  a.simulate = [](std::span<const double> theta, std::span<const double> u) { return DataRecord{theta[0] + u[0]}; };
  return a;
}

PosteriorContour cauchy_posterior_contour(double y) {
  if (!std::isfinite(y)) throw ArgumentError("observation must be finite");
  ContourHints hints{ContourShape::unimodal, y, 1.0};
  return PosteriorContour("cauchy", DataRecord{y}, Interval::real_line(),
                          [y](double theta) { return cauchy_contour_value(y, theta); }, hints);
}

// ----------------------------------------------------------- curved normal

void CurvedNormalModel::validate() const {
  if (n < 2) throw ArgumentError("curved normal needs n >= 2");
  if (sign != 1 && sign != -1) throw ArgumentError("sign of theta must be +1 or -1");
}

Interval CurvedNormalModel::param_domain() const {
  return sign > 0 ? Interval{0.0, kInf, true, true} : Interval{-kInf, 0.0, true, true};
}

CurvedNormalReduction CurvedNormalReduction::from_statistics(double y1, double y2) {
  if (!std::isfinite(y1) || !std::isfinite(y2)) throw ArgumentError("statistics must be finite");
  if (!(y2 > 0.0)) throw DegenerateDataError("sample standard deviation is zero");
  return {y1, y2, y1 / y2};
}

CurvedNormalReduction curved_normal_reduce(std::span<const double> sample) {
  if (sample.size() < 2) throw ArgumentError("curved normal reduction needs at least two observations");
  const double n = static_cast<double>(sample.size());
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : sample) ss += (x - mean) * (x - mean);
  return CurvedNormalReduction::from_statistics(mean, std::sqrt(ss / (n - 1.0)));
}

double curved_normal_eta(int sign, std::span<const double> u) {
  return (static_cast<double>(sign) + u[0]) / u[1];
}

CurvedNormalReduction simulate_curved_normal(const CurvedNormalModel& model, double theta, RandomStream& rng) {
  const double n = static_cast<double>(model.n);
  const double u1 = rng.normal() / std::sqrt(n);
  const double u2 = std::sqrt(rng.chi_squared(n - 1.0) / (n - 1.0));
  const double a = std::abs(theta);
  return CurvedNormalReduction::from_statistics(theta + a * u1, a * u2);
}

double curved_normal_log_kernel(const CurvedNormalModel& model, double h, double v) {
  const double w = model.sign * (h - v);
  if (!(w > 0.0)) return -kInf;
  const double n = static_cast<double>(model.n);
  const double k = model.form == DensityForm::reference ? 1.0 : 3.0;
  const double lw = std::log(w);
  const double ratio = v / (h - v);
  const double inv = 1.0 / (h - v);
  return -k * lw - 0.5 * n * ratio * ratio - (n - 2.0) * lw - 0.5 * (n - 1.0) * inv * inv;
}

namespace {

// The same kernel in t = log(sign (h - v)), free of cancellation near v = h.
double log_kernel_t(const CurvedNormalModel& model, double h, double t) {
  if (t < -700.0) return -kInf;
  const double n = static_cast<double>(model.n);
  const double k = model.form == DensityForm::reference ? 1.0 : 3.0;
  const double e = std::exp(-t);
  const double ratio = model.sign * h * e - 1.0;
  return -k * t - 0.5 * n * ratio * ratio - (n - 2.0) * t - 0.5 * (n - 1.0) * e * e;
}

}  // namespace

CurvedNormalConditional::CurvedNormalConditional(const CurvedNormalModel& model, double h,
                                                 numerics::LevelSetIntegrator::Options options)
    : model_(model), h_(h), sign_(static_cast<double>(model.sign)) {
  model.validate();
  if (!std::isfinite(h)) throw ArgumentError("h must be finite");
  auto level = [model, h](double t) { return log_kernel_t(model, h, t); };
  auto log_weight = [level](double t) { return level(t) + t; };
  double start = 0.0;
  double best = -kInf;
  for (double t = -5.0; t <= 5.0; t += 0.1) {
    const double lw = log_weight(t);
    if (lw > best) {
      best = lw;
      start = t;
    }
  }
  table_ = std::make_shared<const numerics::LevelSetIntegrator>(log_weight, level, Interval::real_line(), start,
                                                                options);
}

Interval CurvedNormalConditional::support() const {
  return sign_ > 0 ? Interval{-kInf, h_, true, true} : Interval{h_, kInf, true, true};
}

double CurvedNormalConditional::t_of_v(double v) const {
  const double w = sign_ * (h_ - v);
  return w > 0.0 ? std::log(w) : -kInf;
}

double CurvedNormalConditional::log_kernel(double v) const { return curved_normal_log_kernel(model_, h_, v); }

double CurvedNormalConditional::density(double v) const {
  const double t = t_of_v(v);
  if (!std::isfinite(t)) return 0.0;
  return table_->weight(t) * std::exp(-t);
}

double CurvedNormalConditional::cdf(double v) const {
  const double t = t_of_v(v);
  if (sign_ > 0) {
    if (v >= h_) return 1.0;
    return 1.0 - table_->cdf(t);
  }
  if (v <= h_) return 0.0;
  return table_->cdf(t);
}

double CurvedNormalConditional::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("probability must lie in [0, 1]");
  if (sign_ > 0) return h_ - std::exp(table_->quantile(1.0 - p));
  return h_ + std::exp(table_->quantile(p));
}

double CurvedNormalConditional::sample(RandomStream& rng) const { return quantile(rng.uniform()); }

double CurvedNormalConditional::contour(double v) const {
  const double t = t_of_v(v);
  if (!std::isfinite(t)) return 0.0;
  return table_->mass_below(log_kernel_t(model_, h_, t));
}

double CurvedNormalConditional::mode() const { return v_of_t(table_->mode()); }

double CurvedNormalConditional::spread() const { return 0.5 * std::abs(quantile(0.75) - quantile(0.25)); }

AuxiliaryDistribution CurvedNormalConditional::as_distribution() const {
  auto self = std::make_shared<const CurvedNormalConditional>(*this);
  AuxiliaryDistribution d;
  d.name = "curved-normal-conditional";
  d.support = support();
  d.density = [self](std::span<const double> v) { return self->density(v[0]); };
  d.cdf = [self](double v) { return self->cdf(v); };
  d.sampler = [self](RandomStream& rng, std::span<double> out) { out[0] = self->sample(rng); };
  d.mode = Point{mode()};
  return d;
}

PosteriorContour curved_normal_posterior_contour(std::shared_ptr<const CurvedNormalConditional> conditional,
                                                 const CurvedNormalReduction& r) {
  if (std::abs(conditional->h() - r.h) > 1e-12 * (1.0 + std::abs(r.h))) {
    throw ArgumentError("conditional density was built for a different h");
  }
  ContourHints hints;
  hints.shape = conditional->unimodal() ? ContourShape::unimodal : ContourShape::general;
  hints.mode = r.y1 - r.y2 * conditional->mode();
  hints.scale = r.y2 * conditional->spread();
  const double y1 = r.y1;
  const double y2 = r.y2;
  return PosteriorContour("curved-normal", r.record(), conditional->model().param_domain(),
                          [conditional, y1, y2](double theta) { return conditional->contour((y1 - theta) / y2); },
                          hints);
}

PosteriorContour curved_normal_posterior_contour(const CurvedNormalModel& model, const CurvedNormalReduction& r) {
  return curved_normal_posterior_contour(std::make_shared<const CurvedNormalConditional>(model, r.h), r);
}

Association curved_normal_association(const CurvedNormalModel& model) {
  model.validate();
  const double n = static_cast<double>(model.n);
  const double sign = static_cast<double>(model.sign);
  const double k = n - 1.0;
  const double log_chi_norm = -0.5 * k * std::log(2.0) - std::lgamma(0.5 * k);

  Association a;
  a.name = "curved-normal";
  a.param_domain = model.param_domain();
  a.aux.name = "curved-normal-auxiliary";
  a.aux.support = ProductSpace{{Interval::real_line(), Interval{0.0, kInf, true, true}}};
  a.aux.density = [n, k, log_chi_norm](std::span<const double> u) {
    if (!(u[1] > 0.0)) return 0.0;
    const double log_f1 = 0.5 * std::log(n / (2.0 * std::numbers::pi)) - 0.5 * n * u[0] * u[0];
    const double x = k * u[1] * u[1];
    const double log_f2 = log_chi_norm + (0.5 * k - 1.0) * std::log(x) - 0.5 * x + std::log(2.0 * k * u[1]);
    return std::exp(log_f1 + log_f2);
  };
  a.aux.sampler = [n, k](RandomStream& rng, std::span<double> out) {
    out[0] = rng.normal() / std::sqrt(n);
    out[1] = std::sqrt(rng.chi_squared(k) / k);
  };
  a.solve_u = [sign](const DataRecord& y, std::span<const double> theta) {
    const double th = theta[0];
    if (!(th * sign > 0.0)) return std::vector<Point>{};
    const double a = std::abs(th);
    return std::vector<Point>{Point{(y.at(0) - th) / a, y.at(1) / a}};
  };
  a.simulate = [](std::span<const double> theta, std::span<const double> u) {
    const double abs_theta = std::abs(theta[0]);
    return DataRecord{theta[0] + abs_theta * u[0], abs_theta * u[1]};
  };
  return a;
}

Association curved_normal_conditional_association(std::shared_ptr<const CurvedNormalConditional> conditional,
                                                  const CurvedNormalReduction& r) {
  Association a;
  a.name = "curved-normal-conditional";
  a.aux = conditional->as_distribution();
  a.param_domain = conditional->model().param_domain();
  a.solve_u = [](const DataRecord& y, std::span<const double> theta) {
    return std::vector<Point>{Point{(y.at(0) - theta[0]) / y.at(1)}};
  };
  a.solve_theta = [](const DataRecord& y, std::span<const double> u) { return Point{y.at(0) - y.at(1) * u[0]}; };
  const double y2 = r.y2;
  a.simulate = [y2](std::span<const double> theta, std::span<const double> u) {
    return DataRecord{theta[0] + y2 * u[0], y2};
  };
  return a;
}

// -------------------------------------------------- exponential errors-in-variables

void EivModel::validate() const {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw ArgumentError("rates must be positive");
  if (!std::isfinite(lambda1) || !std::isfinite(lambda2)) throw ArgumentError("rates must be finite");
  if (!std::isfinite(y1) || !std::isfinite(y2)) throw ArgumentError("observations must be finite");
}

double asymmetric_laplace_cdf(double r1, double r2, double x) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw ArgumentError("asymmetric Laplace rates must be positive");
  if (x >= 0.0) return 1.0 - (r2 / (r1 + r2)) * std::exp(-r1 * x);
  return (r1 / (r1 + r2)) * std::exp(r2 * x);
}

double asymmetric_laplace_quantile(double r1, double r2, double p) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw ArgumentError("asymmetric Laplace rates must be positive");
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;
    throw ArgumentError("probability must lie in [0, 1]");
  }
  const double split = r1 / (r1 + r2);
  if (p >= split) return -std::log((1.0 - p) * (r1 + r2) / r2) / r1;
  return std::log(p * (r1 + r2) / r1) / r2;
}

double eiv_difference_cdf(double lambda1, double lambda2, double phi, double x) {
  if (!(phi > 0.0)) throw DomainError("phi must be positive");
  return asymmetric_laplace_cdf(lambda1, lambda2 / phi, x);
}

double eiv_contour_value(const EivModel& model, double phi) {
  const double g = eiv_difference_cdf(model.lambda1, model.lambda2, phi, model.y1 - phi * model.y2);
  return 1.0 - std::abs(2.0 * g - 1.0);
}

double eiv_tail_limit(const EivModel& model) {
  if (!(model.y2 > 0.0)) return 0.0;
  return 1.0 - std::abs(2.0 * std::exp(-model.lambda2 * model.y2) - 1.0);
}

double eiv_head_limit(const EivModel& model) {
  if (!(model.y1 > 0.0)) return 0.0;
  return 1.0 - std::abs(2.0 * std::exp(-model.lambda1 * model.y1) - 1.0);
}

PosteriorContour eiv_posterior_contour(const EivModel& model) {
  model.validate();
  auto eval = [model](double phi) { return eiv_contour_value(model, phi); };
  // Locate the highest point on a log grid, then refine in log phi.
  constexpr int kPoints = 1201;
  double best_log = 0.0;
  double best = -1.0;
  for (int k = 0; k < kPoints; ++k) {
    const double lp = -6.0 + 12.0 * k / (kPoints - 1.0);
    const double v = eval(std::pow(10.0, lp));
    if (v > best) {
      best = v;
      best_log = lp;
    }
  }
  const double step = 12.0 / (kPoints - 1.0);
  const double refined = numerics::golden_section_max([&](double lp) { return eval(std::pow(10.0, lp)); },
                                                      best_log - step, best_log + step, 1e-12);
  const double mode = std::pow(10.0, eval(std::pow(10.0, refined)) >= best ? refined : best_log);
  ContourHints hints;
  hints.shape = ContourShape::general;
  hints.mode = mode;
  hints.scale = std::max(mode / 4.0, 1e-6);
  return PosteriorContour("exp-eiv", model.record(), Interval{0.0, kInf, true, true}, eval, hints);
}

DataRecord simulate_eiv(double lambda1, double lambda2, double phi, double xi, RandomStream& rng) {
  const double u1 = rng.exponential(lambda1);
  const double u2 = rng.exponential(lambda2);
  return {phi * xi + u1, xi + u2};
}

Association eiv_association(double lambda1, double lambda2) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw ArgumentError("rates must be positive");
  Association a;
  a.name = "exp-eiv-joint";
  a.param_domain = ProductSpace{{Interval::real_line(), Interval::real_line()}};
  a.aux.name = "exponential-pair";
  a.aux.support = ProductSpace{{Interval{0.0, kInf, false, true}, Interval{0.0, kInf, false, true}}};
  a.aux.density = [lambda1, lambda2](std::span<const double> u) {
    if (u[0] < 0.0 || u[1] < 0.0) return 0.0;
    return lambda1 * lambda2 * std::exp(-lambda1 * u[0] - lambda2 * u[1]);
  };
  a.aux.sampler = [lambda1, lambda2](RandomStream& rng, std::span<double> out) {
    out[0] = rng.exponential(lambda1);
    out[1] = rng.exponential(lambda2);
  };
  a.aux.mode = Point{0.0, 0.0};
  a.solve_u = [](const DataRecord& y, std::span<const double> theta) {
    return std::vector<Point>{Point{y.at(0) - theta[0], y.at(1) - theta[1]}};
  };
  a.solve_theta = [](const DataRecord& y, std::span<const double> u) {
    return Point{y.at(0) - u[0], y.at(1) - u[1]};
  };
  a.simulate = [](std::span<const double> theta, std::span<const double> u) {
    return DataRecord{theta[0] + u[0], theta[1] + u[1]};
  };
  return a;
}

Association eiv_marginal_association(double lambda1, double lambda2) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw ArgumentError("rates must be positive");
  Association a;
  a.name = "exp-eiv";
  a.aux = uniform_distribution(0.0, 1.0);
  a.param_domain = Interval{0.0, kInf, true, true};
  a.solve_u = [lambda1, lambda2](const DataRecord& y, std::span<const double> phi) {
    return std::vector<Point>{Point{eiv_difference_cdf(lambda1, lambda2, phi[0], y.at(0) - phi[0] * y.at(1))}};
  };
  // Any record with y1 - phi y2 = G_phi^{-1}(v) solves the association; take y2 = 0.
  a.simulate = [lambda1, lambda2](std::span<const double> phi, std::span<const double> v) {
    return DataRecord{asymmetric_laplace_quantile(lambda1, lambda2 / phi[0], v[0]), 0.0};
  };
  return a;
}

}  // namespace possim
