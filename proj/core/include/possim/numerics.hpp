#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "possim/space.hpp"

namespace possim::numerics {

using RealFn = std::function<double(double)>;

/// Boundary of a predicate by bisection. `pred(inside)` must hold and
/// `pred(outside)` must not; returns a point within `tol` of the switch,
/// on the inside side.
double bisect_boundary(const std::function<bool(double)>& pred, double inside, double outside,
                       double tol = 1e-8, int max_iter = 400);

/// Maximizer of a unimodal function on [lo, hi] by golden-section search.
double golden_section_max(const RealFn& f, double lo, double hi, double tol = 1e-10);

/// Fixed 15-point Gauss-Legendre rule on [a, b].
double gauss_legendre15(const RealFn& f, double a, double b);

/// Adaptive Gauss-Kronrod quadrature on a finite interval.
double adaptive_integral(const RealFn& f, double a, double b, double rel_tol = 1e-10,
                         double* error_estimate = nullptr);

/// Type-7 sample quantile of already sorted data.
double sorted_quantile(const std::vector<double>& sorted, double p);

/// Tabulated one-dimensional probability mass, expressed in a working
/// coordinate t, together with a ranking function `level(t)`.
///
/// The mass density is exp(log_weight(t)) up to normalization. The table
/// covers the range where log_weight is within `log_cutoff` of its peak and
/// stores the cumulative mass at `nodes` equispaced points; partial cells
/// are integrated on demand. `mass_below(c)` returns P{level(T) < c}: for a
/// unimodal level by root finding on both sides of the mode, otherwise by
/// sub-level-set decomposition over the cells.
class LevelSetIntegrator {
 public:
  struct Options {
    std::size_t nodes = 4096;
    double log_cutoff = 40.0;
    double initial_step = 0.25;
    /// Largest distance from the start point scanned on an unbounded side
    /// before the mass is declared non-normalizable.
    double max_extent = 1e4;
    double normalization_tol = 1e-8;
  };

  LevelSetIntegrator(RealFn log_weight, RealFn level, Interval t_support, double t_start,
                     Options options);
  LevelSetIntegrator(RealFn log_weight, RealFn level, Interval t_support, double t_start)
      : LevelSetIntegrator(std::move(log_weight), std::move(level), t_support, t_start, Options{}) {}

  double t_lo() const { return nodes_.front(); }
  double t_hi() const { return nodes_.back(); }
  double log_normalizer() const { return log_normalizer_; }

  /// Normalized mass density in t.
  double weight(double t) const;
  double cdf(double t) const;
  double quantile(double p) const;

  double level(double t) const { return level_(t); }
  double mode() const { return mode_; }
  double mode_level() const { return mode_level_; }
  bool unimodal() const { return unimodal_; }

  /// P{level(T) < c}.
  double mass_below(double c) const;
  /// For a unimodal level, the interval {t : level(t) >= c} clipped to the table.
  std::pair<double, double> upper_level_set(double c) const;

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& node_levels() const { return node_levels_; }

 private:
  double cell_mass(double a, double b) const;
  std::size_t cell_of(double t) const;
  double crossing(double inside, double outside, double c) const;

  RealFn log_weight_;
  RealFn level_;
  double peak_log_weight_ = 0.0;
  double log_normalizer_ = 0.0;
  double normalizer_ = 1.0;
  double step_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> cumulative_;
  std::vector<double> node_levels_;
  std::size_t mode_index_ = 0;
  double mode_ = 0.0;
  double mode_level_ = 0.0;
  bool unimodal_ = true;
};

}  // namespace possim::numerics
