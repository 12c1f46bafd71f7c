#include "possim/space.hpp"

#include <algorithm>
#include <cmath>

#include "possim/error.hpp"

namespace possim {

namespace {

Interval canonical(Interval iv) {
  if (std::isinf(iv.lo)) iv.lo_open = true;
  if (std::isinf(iv.hi)) iv.hi_open = true;
  return iv;
}

}  // namespace

bool Interval::empty() const {
  if (std::isnan(lo) || std::isnan(hi)) return true;
  if (lo > hi) return true;
  if (lo == hi) return lo_open || hi_open || std::isinf(lo);
  return false;
}

bool Interval::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

bool Interval::contains(double x) const {
  if (empty()) return false;
  bool above = lo_open ? x > lo : x >= lo;
  bool below = hi_open ? x < hi : x <= hi;
  return above && below;
}

double Interval::length() const { return empty() ? 0.0 : hi - lo; }

bool Interval::covers(const Interval& other, double slack) const {
  if (other.empty()) return true;
  return other.lo >= lo - slack && other.hi <= hi + slack;
}

IntervalUnion::IntervalUnion(std::initializer_list<Interval> parts)
    : IntervalUnion(std::vector<Interval>(parts)) {}

IntervalUnion::IntervalUnion(std::vector<Interval> parts) {
  std::vector<Interval> kept;
  kept.reserve(parts.size());
  for (auto& p : parts) {
    p = canonical(p);
    if (!p.empty()) kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end(), [](const Interval& a, const Interval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return !a.lo_open && b.lo_open;
  });
  for (const auto& p : kept) {
    if (!parts_.empty()) {
      auto& back = parts_.back();
      bool touches = p.lo < back.hi || (p.lo == back.hi && !(p.lo_open && back.hi_open));
      if (touches) {
        if (p.hi > back.hi || (p.hi == back.hi && !p.hi_open)) {
          back.hi = p.hi;
          back.hi_open = p.hi_open;
        }
        continue;
      }
    }
    parts_.push_back(p);
  }
}

bool IntervalUnion::contains(double x) const {
  return std::any_of(parts_.begin(), parts_.end(), [x](const Interval& p) { return p.contains(x); });
}

bool IntervalUnion::bounded() const {
  return std::all_of(parts_.begin(), parts_.end(), [](const Interval& p) { return p.bounded(); });
}

double IntervalUnion::length() const {
  double total = 0.0;
  for (const auto& p : parts_) total += p.length();
  return total;
}

IntervalUnion IntervalUnion::unite(const IntervalUnion& other) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return IntervalUnion(std::move(all));
}

IntervalUnion IntervalUnion::intersect(const Interval& window) const {
  std::vector<Interval> out;
  for (const auto& p : parts_) {
    Interval q = p;
    if (window.lo > q.lo || (window.lo == q.lo && window.lo_open)) {
      q.lo = window.lo;
      q.lo_open = window.lo_open;
    }
    if (window.hi < q.hi || (window.hi == q.hi && window.hi_open)) {
      q.hi = window.hi;
      q.hi_open = window.hi_open;
    }
    out.push_back(q);
  }
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::complement_within(const Interval& domain) const {
  const IntervalUnion clipped = intersect(domain);
  std::vector<Interval> gaps;
  double cursor = domain.lo;
  bool cursor_excluded = domain.lo_open;
  bool at_domain_start = true;
  for (const auto& p : clipped.parts_) {
    if (p.lo > cursor) {
      gaps.push_back({cursor, p.lo, at_domain_start && domain.lo_open, false});
    } else if (p.lo == cursor && p.lo_open && !cursor_excluded) {
      gaps.push_back({cursor, cursor, false, false});
    }
    cursor = p.hi;
    cursor_excluded = !p.hi_open;
    at_domain_start = false;
  }
  if (domain.hi > cursor) {
    gaps.push_back({cursor, domain.hi, at_domain_start && domain.lo_open, domain.hi_open});
  } else if (domain.hi == cursor && !domain.hi_open && !cursor_excluded && !at_domain_start) {
    gaps.push_back({cursor, cursor, false, false});
  }
  return IntervalUnion(std::move(gaps));
}

bool is_empty(const SetDescriptor& set) {
  if (const auto* u = std::get_if<IntervalUnion>(&set)) return u->empty();
  return std::get<PointSet>(set).points.empty();
}

std::size_t dimension(const SpaceDescriptor& space) {
  if (const auto* p = std::get_if<ProductSpace>(&space)) return p->factors.size();
  return 1;
}

bool is_interval(const SpaceDescriptor& space) { return std::holds_alternative<Interval>(space); }

bool is_finite(const SpaceDescriptor& space) { return std::holds_alternative<FiniteSpace>(space); }

const Interval& as_interval(const SpaceDescriptor& space) {
  if (const auto* iv = std::get_if<Interval>(&space)) return *iv;
  throw UnsupportedError("space is not a one-dimensional interval");
}

SetDescriptor restrict_to(const SetDescriptor& set, const Interval& domain) {
  if (const auto* u = std::get_if<IntervalUnion>(&set)) return u->intersect(domain);
  PointSet kept;
  for (double p : std::get<PointSet>(set).points) {
    if (domain.contains(p)) kept.points.push_back(p);
  }
  return kept;
}

SetDescriptor complement(const SetDescriptor& set, const SpaceDescriptor& space) {
  if (const auto* finite = std::get_if<FiniteSpace>(&space)) {
    const auto* pts = std::get_if<PointSet>(&set);
    if (pts == nullptr) throw DomainError("finite spaces only accept point sets of label indices");
    PointSet out;
    for (std::size_t i = 0; i < finite->labels.size(); ++i) {
      double idx = static_cast<double>(i);
      if (std::find(pts->points.begin(), pts->points.end(), idx) == pts->points.end()) {
        out.points.push_back(idx);
      }
    }
    return out;
  }
  const Interval& domain = as_interval(space);
  if (const auto* u = std::get_if<IntervalUnion>(&set)) return u->complement_within(domain);
  // Removing finitely many points leaves a set whose closure is the domain.
  return IntervalUnion{domain};
}

}  // namespace possim
