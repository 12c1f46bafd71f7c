#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace possim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Point = std::vector<double>;
using DataRecord = std::vector<double>;

/// A real interval with possibly infinite endpoints. Endpoints are closed
/// unless flagged open; an infinite endpoint is always open.
struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool lo_open = false;
  bool hi_open = false;

  static Interval real_line() { return {}; }
  static Interval closed(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval open(double lo, double hi) { return {lo, hi, true, true}; }
  static Interval positive_half_line() { return {0.0, kInf, true, false}; }

  bool empty() const;
  bool bounded() const;
  bool contains(double x) const;
  double length() const;
  /// True when `other` lies inside this interval up to `slack`.
  bool covers(const Interval& other, double slack = 1e-12) const;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorted union of disjoint intervals.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  explicit IntervalUnion(std::vector<Interval> parts);
  IntervalUnion(std::initializer_list<Interval> parts);

  const std::vector<Interval>& intervals() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  bool contains(double x) const;
  bool bounded() const;
  /// Total length, +inf when any piece is unbounded.
  double length() const;

  IntervalUnion unite(const IntervalUnion& other) const;
  IntervalUnion intersect(const Interval& window) const;
  /// Complement relative to `domain`. Boundary points shared with the set
  /// are kept (the result is the closure of the true complement).
  IntervalUnion complement_within(const Interval& domain) const;

 private:
  std::vector<Interval> parts_;
};

/// Finite set of points. On a finite label space the values are label indices.
struct PointSet {
  std::vector<double> points;
};

using SetDescriptor = std::variant<IntervalUnion, PointSet>;

bool is_empty(const SetDescriptor& set);

struct ProductSpace {
  std::vector<Interval> factors;
};

struct FiniteSpace {
  std::vector<std::string> labels;
};

/// Domain of a contour or support of a distribution.
using SpaceDescriptor = std::variant<Interval, ProductSpace, FiniteSpace>;

std::size_t dimension(const SpaceDescriptor& space);
bool is_interval(const SpaceDescriptor& space);
bool is_finite(const SpaceDescriptor& space);
const Interval& as_interval(const SpaceDescriptor& space);

/// The part of `set` inside `domain`; assertions written on the real line
/// are restricted this way before measuring them on a half-line.
SetDescriptor restrict_to(const SetDescriptor& set, const Interval& domain);

/// Complement of `set` within `space`, up to closure on continuous spaces.
SetDescriptor complement(const SetDescriptor& set, const SpaceDescriptor& space);

}  // namespace possim
