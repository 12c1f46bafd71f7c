#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "possim/association.hpp"
#include "possim/contour.hpp"
#include "possim/models.hpp"

namespace possim {

/// Data-dependent set function compared against the IM necessity.
struct BeliefAssigner {
  std::string name;
  std::function<double(const DataRecord& y, const SetDescriptor& a)> assign;
};

/// Possibility contour of the fiducial density f(u_{y,theta}) J_y(theta):
/// theta -> P{f(U) J_y(theta_{y,U}) < f(u_{y,theta}) J_y(theta)}, with the
/// Jacobian J_y = |du_{y,theta}/dtheta| from central differences.
PossibilityContour fiducial_contour(const Association& assoc, const DataRecord& y, std::size_t budget,
                                    std::uint64_t seed = 1);

/// Jacobian |du_{y,theta}/dtheta| by central differences with relative step 1e-6.
double association_jacobian(const Association& assoc, const DataRecord& y, double theta);

/// P(theta_{y,U} >= theta). Uses the auxiliary CDF when there is one, else
/// `budget` draws. Throws UnsupportedError if theta_{y,u} is not monotone in u.
double fiducial_halfline_possibility(const Association& assoc, const DataRecord& y, double theta,
                                     std::size_t budget = 100000, std::uint64_t seed = 1);

/// Equal-tailed `level` interval from sample quantiles of y1 - y2 V with V
/// drawn from the conditional law given h.
Interval curved_normal_fiducial_interval(const CurvedNormalModel& model, const CurvedNormalReduction& r,
                                         double level, std::size_t budget, std::uint64_t seed = 1);
Interval curved_normal_fiducial_interval(const CurvedNormalConditional& conditional, const CurvedNormalReduction& r,
                                         double level, std::size_t budget, RandomStream& rng);

enum class PositivityHandling {
  /// Flat prior on the whole plane: theta_i = y_i - E_i with no restriction.
  none,
  /// Discard draws with theta1 <= 0 or theta2 <= 0.
  reject_nonpositive,
};

/// Flat-prior posterior probability that phi = theta1 / theta2 satisfies `a`,
/// from `budget` draws of theta_i = y_i - E_i, E_i ~ Exp(lambda_i).
double eiv_flat_bayes_probability(const EivModel& model, const std::function<bool(double)>& a, std::size_t budget,
                                  RandomStream& rng, PositivityHandling positivity = PositivityHandling::none);
double eiv_flat_bayes_probability(const EivModel& model, const std::function<bool(double)>& a, std::size_t budget,
                                  std::uint64_t seed = 1, PositivityHandling positivity = PositivityHandling::none);

/// Scale association y = theta u with u ~ Exp(1) on theta > 0; its IM
/// contour is exp(-y / theta).
Association scale_association();

}  // namespace possim
