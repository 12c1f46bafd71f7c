#include "possim/measure.hpp"

#include <algorithm>
#include <cmath>

#include "possim/error.hpp"
#include "possim/numerics.hpp"

namespace possim {

namespace {

constexpr double kEndpointTol = 1e-8;
constexpr std::size_t kCorePoints = 2001;
constexpr std::size_t kTailPoints = 300;
constexpr std::size_t kEdgePoints = 240;
constexpr double kCoreHalfWidth = 20.0;

double anchor_of(const PossibilityContour& contour, const Interval& d) {
  if (auto m = contour.mode_1d(); m && std::isfinite(*m) && d.contains(*m)) return *m;
  if (d.bounded()) return 0.5 * (d.lo + d.hi);
  if (std::isfinite(d.lo)) return d.lo + contour.scale();
  if (std::isfinite(d.hi)) return d.hi - contour.scale();
  return 0.0;
}

double nudge_inside(const Interval& d, double x) {
  const double eps = 1e-10 * (1.0 + std::abs(x));
  if (x <= d.lo) return std::min(d.lo + eps, 0.5 * (d.lo + d.hi));
  if (x >= d.hi) return std::max(d.hi - eps, 0.5 * (d.lo + d.hi));
  return x;
}

// Finite stand-in for a boundary point: the horizon for infinite ends, a
// nudged point for excluded finite ends.
double finite_proxy(const PossibilityContour& contour, const Interval& d, double x) {
  if (std::isinf(x)) {
    const double a = anchor_of(contour, d);
    return x > 0 ? a + contour.horizon() : a - contour.horizon();
  }
  if (d.contains(x)) return x;
  return nudge_inside(d, x);
}

bool passes(double value, double alpha, bool strict) { return strict ? value > alpha : value >= alpha; }

void check_inside(const Interval& d, const Interval& piece) {
  if (!d.covers(piece, 1e-12 * (1.0 + std::abs(piece.lo) + std::abs(piece.hi)))) {
    throw DomainError("set extends outside the contour's domain");
  }
}

double sup_general(const PossibilityContour& contour, const Interval& piece) {
  const Interval& d = as_interval(contour.domain());
  std::vector<double> pts;
  for (double x : scan_grid(contour)) {
    if (piece.contains(x)) pts.push_back(x);
  }
  const double lo = finite_proxy(contour, d, piece.lo);
  const double hi = finite_proxy(contour, d, piece.hi);
  if (hi > lo) {
    for (std::size_t k = 0; k <= 256; ++k) pts.push_back(lo + (hi - lo) * static_cast<double>(k) / 256.0);
  }
  pts.push_back(lo);
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<double> vals(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) vals[k] = contour(pts[k]);
  double best = std::max(boundary_value(contour, piece.lo), boundary_value(contour, piece.hi));
  best = std::max(best, *std::max_element(vals.begin(), vals.end()));

  std::vector<std::size_t> peaks;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const bool left_ok = k == 0 || vals[k] >= vals[k - 1];
    const bool right_ok = k + 1 == pts.size() || vals[k] >= vals[k + 1];
    if (left_ok && right_ok) peaks.push_back(k);
  }
  std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
  if (peaks.size() > 8) peaks.resize(8);
  for (std::size_t k : peaks) {
    const double a = pts[k == 0 ? 0 : k - 1];
    const double b = pts[std::min(k + 1, pts.size() - 1)];
    if (!(b > a)) continue;
    const double x = numerics::golden_section_max([&](double t) { return contour(t); }, a, b, 1e-12);
    best = std::max(best, contour(x));
  }
  return std::clamp(best, 0.0, 1.0);
}

// Endpoint of a unimodal level set on one side of the mode.
double side_endpoint(const PossibilityContour& contour, const Interval& d, double mode, double dir, double alpha,
                     bool strict) {
  const double bound = dir > 0 ? d.hi : d.lo;
  if (passes(boundary_value(contour, bound), alpha, strict)) return bound;
  const double far = finite_proxy(contour, d, bound);
  double outside = far;
  for (double step = contour.scale(); step < std::abs(far - mode); step *= 2.0) {
    const double x = mode + dir * step;
    if (!passes(contour(x), alpha, strict)) {
      outside = x;
      break;
    }
  }
  const double tol = kEndpointTol * std::max(1.0, 1e-6 * std::abs(outside));
  return numerics::bisect_boundary([&](double x) { return passes(contour(x), alpha, strict); }, mode, outside, tol);
}

IntervalUnion exact_level_set(const PossibilityContour& contour, const Interval& d, double alpha, bool strict) {
  double mode;
  if (contour.shape() == ContourShape::monotone && !contour.mode_1d()) {
    const double left = boundary_value(contour, d.lo);
    const double right = boundary_value(contour, d.hi);
    mode = finite_proxy(contour, d, left >= right ? d.lo : d.hi);
  } else {
    mode = *contour.mode_1d();
  }
  if (!passes(contour(mode), alpha, strict)) return {};
  const double lo = side_endpoint(contour, d, mode, -1.0, alpha, strict);
  const double hi = side_endpoint(contour, d, mode, +1.0, alpha, strict);
  const bool lo_open = lo == d.lo ? d.lo_open : strict;
  const bool hi_open = hi == d.hi ? d.hi_open : strict;
  return IntervalUnion{Interval{lo, hi, lo_open, hi_open}};
}

}  // namespace

double boundary_value(const PossibilityContour& contour, double x) {
  const Interval& d = as_interval(contour.domain());
  return contour(finite_proxy(contour, d, x));
}

std::vector<double> scan_grid(const PossibilityContour& contour) {
  const Interval& d = as_interval(contour.domain());
  const double c = anchor_of(contour, d);
  const double w = kCoreHalfWidth * contour.scale();
  const double core_lo = std::max(d.lo, c - w);
  const double core_hi = std::min(d.hi, c + w);
  std::vector<double> pts;
  pts.reserve(kCorePoints + 2 * (kTailPoints + kEdgePoints));
  for (std::size_t k = 0; k < kCorePoints; ++k) {
    pts.push_back(core_lo + (core_hi - core_lo) * static_cast<double>(k) / static_cast<double>(kCorePoints - 1));
  }
  auto extend = [&](double edge, double bound, double dir) {
    if (std::isinf(bound)) {
      const double start = std::abs(edge - c);
      const double ratio = std::pow(contour.horizon() / start, 1.0 / static_cast<double>(kTailPoints));
      double dist = start;
      for (std::size_t k = 0; k < kTailPoints; ++k) {
        dist *= ratio;
        pts.push_back(c + dir * dist);
      }
      return;
    }
    // Geometric approach toward a finite bound, down to 1e-12 of the gap.
    const double gap = std::abs(bound - edge);
    if (!(gap > 0.0)) return;
    for (std::size_t k = 1; k <= kEdgePoints; ++k) {
      pts.push_back(bound - dir * gap * std::pow(10.0, -static_cast<double>(k) / 20.0));
    }
  };
  extend(core_lo, d.lo, -1.0);
  extend(core_hi, d.hi, +1.0);
  // The core can start or end on a finite bound; approach it from inside as well.
  if (core_lo == d.lo) extend(core_lo + (core_hi - core_lo) / static_cast<double>(kCorePoints - 1), d.lo, -1.0);
  if (core_hi == d.hi) extend(core_hi - (core_hi - core_lo) / static_cast<double>(kCorePoints - 1), d.hi, +1.0);

  std::vector<double> kept;
  kept.reserve(pts.size());
  for (double x : pts) {
    if (d.contains(x) && std::isfinite(x)) kept.push_back(x);
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  return kept;
}

double sup_on_interval(const PossibilityContour& contour, const Interval& piece) {
  if (piece.empty()) return 0.0;
  const Interval& d = as_interval(contour.domain());
  check_inside(d, piece);
  const auto mode = contour.mode_1d();
  if (contour.shape() == ContourShape::unimodal && mode) {
    const double m = *mode;
    if (m >= piece.lo && m <= piece.hi) return boundary_value(contour, m);
    return boundary_value(contour, m < piece.lo ? piece.lo : piece.hi);
  }
  if (contour.shape() == ContourShape::monotone) {
    return std::max(boundary_value(contour, piece.lo), boundary_value(contour, piece.hi));
  }
  return sup_general(contour, piece);
}

double eval_possibility(const PossibilityContour& contour, const SetDescriptor& k) {
  if (is_empty(k)) return 0.0;
  const auto& domain = contour.domain();
  if (const auto* finite = std::get_if<FiniteSpace>(&domain)) {
    const auto* pts = std::get_if<PointSet>(&k);
    if (pts == nullptr) throw DomainError("finite domains accept only point sets of label indices");
    double best = 0.0;
    for (double p : pts->points) {
      if (!(p >= 0.0) || p >= static_cast<double>(finite->labels.size()) || p != std::floor(p)) {
        throw DomainError("label index outside the finite domain");
      }
      best = std::max(best, contour(p));
    }
    return best;
  }
  if (const auto* product = std::get_if<ProductSpace>(&domain)) {
    const auto* pts = std::get_if<PointSet>(&k);
    const std::size_t dim = product->factors.size();
    if (pts == nullptr) throw UnsupportedError("sets on product spaces must be finite point sets");
    if (pts->points.size() % dim != 0) throw DomainError("point set does not match the domain dimension");
    double best = 0.0;
    for (std::size_t i = 0; i < pts->points.size(); i += dim) {
      std::span<const double> u(pts->points.data() + i, dim);
      for (std::size_t j = 0; j < dim; ++j) {
        if (!product->factors[j].contains(u[j])) throw DomainError("point outside the contour's domain");
      }
      best = std::max(best, contour(u));
    }
    return best;
  }
  const Interval& d = std::get<Interval>(domain);
  if (const auto* pts = std::get_if<PointSet>(&k)) {
    double best = 0.0;
    for (double p : pts->points) {
      if (!d.contains(p)) throw DomainError("point outside the contour's domain");
      best = std::max(best, contour(p));
    }
    return best;
  }
  double best = 0.0;
  for (const auto& piece : std::get<IntervalUnion>(k).intervals()) best = std::max(best, sup_on_interval(contour, piece));
  return best;
}

double necessity_of(const PossibilityContour& contour, const SetDescriptor& k) {
  if (const auto* u = std::get_if<IntervalUnion>(&k); u != nullptr && is_interval(contour.domain())) {
    const Interval& d = as_interval(contour.domain());
    for (const auto& piece : u->intervals()) check_inside(d, piece);
  }
  return 1.0 - eval_possibility(contour, complement(k, contour.domain()));
}

IntervalUnion level_set_scan(const PossibilityContour& contour, double alpha, bool strict) {
  const Interval& d = as_interval(contour.domain());
  const std::vector<double> pts = scan_grid(contour);
  std::vector<bool> in(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) in[k] = passes(contour(pts[k]), alpha, strict);
  auto pred = [&](double x) { return passes(contour(x), alpha, strict); };
  auto refine = [&](double inside, double outside) {
    const double tol = kEndpointTol * std::max(1.0, 1e-6 * std::abs(outside));
    return numerics::bisect_boundary(pred, inside, outside, tol);
  };

  std::vector<Interval> parts;
  std::size_t k = 0;
  while (k < pts.size()) {
    if (!in[k]) {
      ++k;
      continue;
    }
    const std::size_t start = k;
    while (k + 1 < pts.size() && in[k + 1]) ++k;
    const std::size_t stop = k;
    ++k;
    Interval piece;
    if (start == 0 && passes(boundary_value(contour, d.lo), alpha, strict)) {
      piece.lo = d.lo;
      piece.lo_open = d.lo_open;
    } else if (start == 0) {
      piece.lo = refine(pts[0], finite_proxy(contour, d, d.lo));
      piece.lo_open = strict;
    } else {
      piece.lo = refine(pts[start], pts[start - 1]);
      piece.lo_open = strict;
    }
    if (stop + 1 == pts.size() && passes(boundary_value(contour, d.hi), alpha, strict)) {
      piece.hi = d.hi;
      piece.hi_open = d.hi_open;
    } else if (stop + 1 == pts.size()) {
      piece.hi = refine(pts[stop], finite_proxy(contour, d, d.hi));
      piece.hi_open = strict;
    } else {
      piece.hi = refine(pts[stop], pts[stop + 1]);
      piece.hi_open = strict;
    }
    parts.push_back(piece);
  }
  return IntervalUnion(std::move(parts));
}

IntervalUnion level_set(const PossibilityContour& contour, double alpha, bool strict) {
  const Interval& d = as_interval(contour.domain());
  const bool exact = (contour.shape() == ContourShape::unimodal && contour.mode_1d()) ||
                     contour.shape() == ContourShape::monotone;
  if (!exact) return level_set_scan(contour, alpha, strict);
  return exact_level_set(contour, d, alpha, strict);
}

AlphaCut alpha_cut(const PossibilityContour& contour, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ArgumentError("alpha must lie in [0, 1]");
  AlphaCut cut;
  cut.alpha = alpha;
  const auto& domain = contour.domain();
  if (const auto* finite = std::get_if<FiniteSpace>(&domain)) {
    for (std::size_t i = 0; i < finite->labels.size(); ++i) {
      if (contour(static_cast<double>(i)) >= alpha) {
        cut.indices.push_back(i);
        cut.labels.push_back(finite->labels[i]);
      }
    }
    return cut;
  }
  if (!is_interval(domain)) throw UnsupportedError("alpha cuts on product spaces are not supported");
  const Interval& d = std::get<Interval>(domain);
  if (alpha == 0.0) {
    cut.set = IntervalUnion{d};
    return cut;
  }
  if (contour.shape() == ContourShape::general || (contour.shape() == ContourShape::unimodal && !contour.mode_1d())) {
    throw UnsupportedError("exact alpha cuts need a unimodal or monotone contour; use level_set_scan");
  }
  cut.set = exact_level_set(contour, d, alpha, false);
  return cut;
}

}  // namespace possim
