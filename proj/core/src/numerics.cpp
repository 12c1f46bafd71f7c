#include "possim/numerics.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "possim/error.hpp"

namespace possim::numerics {

double bisect_boundary(const std::function<bool(double)>& pred, double inside, double outside,
                       double tol, int max_iter) {
  for (int i = 0; i < max_iter && std::abs(outside - inside) > tol; ++i) {
    const double mid = 0.5 * (inside + outside);
    if (mid == inside || mid == outside) break;
    if (pred(mid)) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return inside;
}

double golden_section_max(const RealFn& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (std::abs(b - a) > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    if (c == d) break;
  }
  return fc >= fd ? c : d;
}

double gauss_legendre15(const RealFn& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss<double, 15>::integrate(f, a, b);
}

double adaptive_integral(const RealFn& f, double a, double b, double rel_tol, double* error_estimate) {
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, rel_tol, &err);
  if (error_estimate != nullptr) *error_estimate = err;
  return value;
}

double sorted_quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw ArgumentError("sorted_quantile: empty sample");
  if (sorted.size() == 1) return sorted.front();
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

LevelSetIntegrator::LevelSetIntegrator(RealFn log_weight, RealFn level, Interval t_support,
                                       double t_start, Options options)
    : log_weight_(std::move(log_weight)), level_(std::move(level)) {
  if (options.nodes < 16) throw ArgumentError("LevelSetIntegrator: need at least 16 nodes");
  double peak = log_weight_(t_start);
  if (!std::isfinite(peak)) throw NumericError("LevelSetIntegrator: start point has no mass");

  auto scan = [&](double direction) {
    const double bound = direction > 0 ? t_support.hi : t_support.lo;
    double t = t_start;
    for (;;) {
      const double step = std::max(options.initial_step, 0.05 * std::abs(t - t_start));
      double next = t + direction * step;
      if (std::isfinite(bound) && (direction > 0 ? next >= bound : next <= bound)) return bound;
      if (std::abs(next - t_start) > options.max_extent) {
        throw NumericError("normalization integral is non-finite: mass does not decay on an unbounded side");
      }
      double lw = log_weight_(next);
      if (std::isnan(lw)) lw = -kInf;
      peak = std::max(peak, lw);
      t = next;
      if (lw < peak - options.log_cutoff) return t;
    }
  };
  const double hi = scan(+1.0);
  const double lo = scan(-1.0);
  peak_log_weight_ = peak;

  const std::size_t n = options.nodes;
  step_ = (hi - lo) / static_cast<double>(n - 1);
  nodes_.resize(n);
  for (std::size_t k = 0; k < n; ++k) nodes_[k] = lo + step_ * static_cast<double>(k);
  nodes_.back() = hi;

  cumulative_.assign(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    cumulative_[k + 1] = cumulative_[k] + cell_mass(nodes_[k], nodes_[k + 1]);
  }
  const double total = cumulative_.back();
  if (!std::isfinite(total) || total <= 0.0) {
    throw NumericError("normalization integral is non-finite or zero");
  }
  const double check = adaptive_integral(
      [this](double t) {
        const double lw = log_weight_(t);
        return std::isfinite(lw) ? std::exp(lw - peak_log_weight_) : 0.0;
      },
      lo, hi, 1e-12);
  if (!(std::abs(check - total) <= options.normalization_tol * total)) {
    throw NumericError("normalization integral disagrees between composite and adaptive rules");
  }
  normalizer_ = total;
  log_normalizer_ = peak_log_weight_ + std::log(total);
  for (double& c : cumulative_) c /= total;
  cumulative_.back() = 1.0;

  node_levels_.resize(n);
  for (std::size_t k = 0; k < n; ++k) node_levels_[k] = level_(nodes_[k]);
  mode_index_ = static_cast<std::size_t>(
      std::max_element(node_levels_.begin(), node_levels_.end()) - node_levels_.begin());
  const double a = nodes_[mode_index_ == 0 ? 0 : mode_index_ - 1];
  const double b = nodes_[std::min(mode_index_ + 1, n - 1)];
  mode_ = golden_section_max(level_, a, b, 1e-14);
  mode_level_ = level_(mode_);
  if (node_levels_[mode_index_] > mode_level_) {
    mode_ = nodes_[mode_index_];
    mode_level_ = node_levels_[mode_index_];
  }

  auto slack = [](double v) { return 1e-10 * (1.0 + std::abs(v)); };
  for (std::size_t k = 0; k + 1 <= mode_index_ && unimodal_; ++k) {
    if (std::isfinite(node_levels_[k]) && node_levels_[k + 1] < node_levels_[k] - slack(node_levels_[k])) {
      unimodal_ = false;
    }
  }
  for (std::size_t k = mode_index_; k + 1 < n && unimodal_; ++k) {
    if (std::isfinite(node_levels_[k + 1]) && node_levels_[k + 1] > node_levels_[k] + slack(node_levels_[k])) {
      unimodal_ = false;
    }
  }
}

double LevelSetIntegrator::cell_mass(double a, double b) const {
  return gauss_legendre15(
      [this](double t) {
        const double lw = log_weight_(t);
        return std::isfinite(lw) ? std::exp(lw - peak_log_weight_) : 0.0;
      },
      a, b);
}

std::size_t LevelSetIntegrator::cell_of(double t) const {
  const double pos = (t - nodes_.front()) / step_;
  if (!(pos > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(pos), nodes_.size() - 2);
}

double LevelSetIntegrator::weight(double t) const {
  const double lw = log_weight_(t);
  return std::isfinite(lw) ? std::exp(lw - log_normalizer_) : 0.0;
}

double LevelSetIntegrator::cdf(double t) const {
  if (t <= nodes_.front()) return 0.0;
  if (t >= nodes_.back()) return 1.0;
  const std::size_t k = cell_of(t);
  const double value = cumulative_[k] + cell_mass(nodes_[k], t) / normalizer_;
  return std::clamp(value, cumulative_[k], cumulative_[k + 1]);
}

double LevelSetIntegrator::quantile(double p) const {
  if (p <= 0.0) return nodes_.front();
  if (p >= 1.0) return nodes_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), p);
  std::size_t k = static_cast<std::size_t>(it - cumulative_.begin());
  k = std::clamp<std::size_t>(k, 1, nodes_.size() - 1) - 1;
  double a = nodes_[k];
  double b = nodes_[k + 1];
  const double ca = cumulative_[k];
  const double cb = cumulative_[k + 1];
  double x = cb > ca ? a + (b - a) * (p - ca) / (cb - ca) : 0.5 * (a + b);
  for (int iter = 0; iter < 30; ++iter) {
    const double f = cdf(x) - p;
    if (std::abs(f) < 1e-14) break;
    if (f > 0.0) {
      b = x;
    } else {
      a = x;
    }
    const double w = weight(x);
    double next = w > 0.0 ? x - f / w : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (next == x) break;
    x = next;
  }
  return x;
}

double LevelSetIntegrator::crossing(double inside, double outside, double c) const {
  const double tol = 1e-14 * (1.0 + std::abs(inside) + std::abs(outside));
  return bisect_boundary([&](double t) { return level_(t) >= c; }, inside, outside, tol);
}

std::pair<double, double> LevelSetIntegrator::upper_level_set(double c) const {
  if (!unimodal_) throw UnsupportedError("upper_level_set requires a unimodal level function");
  if (c > mode_level_) return {mode_, mode_};
  const std::size_t n = nodes_.size();
  const std::size_t m = mode_index_;

  double left = nodes_.front();
  if (node_levels_.front() < c) {
    // First node in [0, m] with level >= c; levels are nondecreasing there.
    auto first = std::partition_point(node_levels_.begin(), node_levels_.begin() + static_cast<std::ptrdiff_t>(m) + 1,
                                      [c](double v) { return v < c; });
    const auto j = static_cast<std::size_t>(first - node_levels_.begin());
    if (j <= m) {
      left = crossing(nodes_[j], nodes_[j - 1], c);
    } else {
      const std::size_t p = cell_of(mode_);
      left = crossing(mode_, nodes_[p], c);
    }
  }

  double right = nodes_.back();
  if (node_levels_.back() < c) {
    // Last node in [m, n) with level >= c; levels are nonincreasing there.
    auto past = std::partition_point(node_levels_.begin() + static_cast<std::ptrdiff_t>(m), node_levels_.end(),
                                     [c](double v) { return v >= c; });
    const auto j = static_cast<std::size_t>(past - node_levels_.begin());
    if (j > m) {
      right = crossing(nodes_[j - 1], nodes_[j], c);
    } else {
      const std::size_t q = std::min(cell_of(mode_) + 1, n - 1);
      right = crossing(mode_, nodes_[q], c);
    }
  }
  return {left, right};
}

double LevelSetIntegrator::mass_below(double c) const {
  if (c >= mode_level_) return 1.0;
  if (unimodal_) {
    const auto [left, right] = upper_level_set(c);
    const double below_left = node_levels_.front() >= c ? 0.0 : cdf(left);
    const double below_right = node_levels_.back() >= c ? 0.0 : 1.0 - cdf(right);
    return std::clamp(below_left + below_right, 0.0, 1.0);
  }
  double mass = 0.0;
  for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
    const bool a_below = node_levels_[k] < c;
    const bool b_below = node_levels_[k + 1] < c;
    if (a_below && b_below) {
      mass += cumulative_[k + 1] - cumulative_[k];
    } else if (a_below != b_below) {
      const double inside = a_below ? nodes_[k + 1] : nodes_[k];
      const double outside = a_below ? nodes_[k] : nodes_[k + 1];
      const double cut = crossing(inside, outside, c);
      mass += a_below ? cell_mass(nodes_[k], cut) / normalizer_ : cell_mass(cut, nodes_[k + 1]) / normalizer_;
    }
  }
  return std::clamp(mass, 0.0, 1.0);
}

}  // namespace possim::numerics
