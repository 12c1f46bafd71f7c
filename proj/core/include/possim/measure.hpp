#pragma once

#include <string>
#include <vector>

#include "possim/contour.hpp"
#include "possim/space.hpp"

namespace possim {

/// Possibility of a set: sup of the contour over K, 0 for empty K.
///
/// Interval pieces of unimodal and monotone contours are handled exactly from
/// the mode and the endpoint values. General shapes are scanned on a grid
/// that reaches the horizon and refined by golden-section search around each
/// local maximum.
double eval_possibility(const PossibilityContour& contour, const SetDescriptor& k);

/// 1 - possibility of the complement of K within the contour's domain.
double necessity_of(const PossibilityContour& contour, const SetDescriptor& k);

/// Supremum of a 1-D contour over one interval inside its domain.
double sup_on_interval(const PossibilityContour& contour, const Interval& piece);

struct AlphaCut {
  double alpha = 0.0;
  IntervalUnion set;
  /// Labels of the retained atoms on a finite domain.
  std::vector<std::string> labels;
  /// Label indices of the retained atoms on a finite domain.
  std::vector<std::size_t> indices;
};

/// The upper level set {u : pi(u) >= alpha}. Endpoints of unimodal and
/// monotone contours are bisected to 1e-8; an endpoint is infinite when the
/// contour at the horizon is still at least alpha.
AlphaCut alpha_cut(const PossibilityContour& contour, double alpha);

/// {u : pi(u) > alpha} when `strict`, else {u : pi(u) >= alpha}, on a 1-D
/// domain. Bisects from the mode for unimodal and monotone contours and falls
/// back to level_set_scan for general shapes.
IntervalUnion level_set(const PossibilityContour& contour, double alpha, bool strict);

/// Level set {u : pi(u) > alpha} (strict) or {pi >= alpha}, for any 1-D
/// shape, found by scanning the same grid as eval_possibility and bisecting
/// each crossing. Use when alpha_cut rejects a general shape.
IntervalUnion level_set_scan(const PossibilityContour& contour, double alpha, bool strict);

/// Evaluation points used for general-shape scans: a dense core around the
/// contour's mode (or domain center) plus geometric spacing out to the
/// horizon and toward finite open bounds. All points lie inside the domain.
std::vector<double> scan_grid(const PossibilityContour& contour);

/// Contour value at x, or its limit from inside the domain when x is an
/// excluded or infinite boundary point.
double boundary_value(const PossibilityContour& contour, double x);

}  // namespace possim
