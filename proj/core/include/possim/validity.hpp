#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "possim/association.hpp"
#include "possim/baselines.hpp"
#include "possim/models.hpp"
#include "possim/random.hpp"

namespace possim {

struct CauchySpec {};

struct CurvedNormalSpec {
  CurvedNormalModel model;
};

/// Errors-in-variables with the nuisance xi held at its true value.
struct EivSpec {
  double lambda1 = 5.0;
  double lambda2 = 5.0;
  double xi = 0.1;
};

using ModelSpec = std::variant<CauchySpec, CurvedNormalSpec, EivSpec>;

/// Registered name of a model: "cauchy", "curved-normal" or "exp-eiv".
std::string model_name(const ModelSpec& spec);

/// Draws one data record at the true parameter.
DataRecord simulate_data(const ModelSpec& spec, double theta, RandomStream& rng);

/// Posterior contour of the model's IM for a data record.
PosteriorContour build_posterior(const ModelSpec& spec, const DataRecord& y);

struct ReplicationPlan {
  ModelSpec model;
  /// True value of the interest parameter (phi for exp-eiv).
  double theta = 0.0;
  std::size_t reps = 1000;
  std::uint64_t seed = 1;
  std::vector<double> alpha_grid;  // empty means 0, 0.001, ..., 1
  double delta = 0.01;
  /// Worker threads; 0 picks the hardware concurrency. Results never depend on it.
  std::size_t workers = 0;

  void validate() const;
  std::vector<double> grid() const;
};

/// Runs body(i) for i in [0, n) on `workers` threads. Each index is handled
/// exactly once; the first exception thrown is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body);

enum class Statistic { contour_at_truth, necessity_of_assertion, possibility_of_assertion };

enum class Direction {
  /// CDF(alpha) <= alpha + band: the statistic is stochastically no smaller than uniform.
  upper,
  /// CDF(alpha) >= alpha - band: the statistic is stochastically no larger than uniform.
  lower,
};

struct ValidityReport {
  std::string model;
  Statistic statistic = Statistic::contour_at_truth;
  Direction direction = Direction::upper;
  std::vector<double> alpha;
  std::vector<double> cdf;
  double band = 0.0;
  double delta = 0.01;
  /// Largest excursion past the diagonal in the validity direction.
  double max_violation = 0.0;
  bool pass = false;
  /// sup |CDF(alpha) - alpha| over the grid and whether it is within the band.
  double two_sided_distance = 0.0;
  bool two_sided_pass = false;
  std::vector<double> values;
};

/// Empirical CDF of a per-replicate statistic on the alpha grid. The
/// assertion is required for the assertion statistics; necessity is checked
/// in the lower direction (false assertions), the others in the upper one.
ValidityReport validity_cdf(const ReplicationPlan& plan, Statistic statistic,
                            const std::optional<SetDescriptor>& assertion = std::nullopt);

enum class IntervalMethod { im, fiducial };

std::string method_name(IntervalMethod method);

struct CoverageResult {
  IntervalMethod method = IntervalMethod::im;
  double level = 0.95;
  double coverage = 0.0;
  /// Mean over bounded intervals only.
  double mean_length = 0.0;
  std::size_t unbounded_count = 0;
  double mc_se = 0.0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
};

/// Coverage and mean length of `level` IM plausibility regions or fiducial
/// intervals. Both methods see the same simulated data for a given seed.
CoverageResult coverage_study(const ReplicationPlan& plan, double level, IntervalMethod method,
                              std::size_t fiducial_budget = 2000);

struct FalseConfidenceTable {
  std::vector<double> alpha;
  std::vector<std::string> assigners;
  /// cdf[j][k]: empirical CDF of assigner j at alpha[k].
  std::vector<std::vector<double>> cdf;
  std::vector<std::vector<double>> values;
  double band = 0.0;
};

/// One simulation pass evaluating every assigner on each replicate.
FalseConfidenceTable false_confidence_curves(const ReplicationPlan& plan, const SetDescriptor& assertion,
                                             const std::vector<BeliefAssigner>& assigners);

/// Posterior necessity of the model's IM, as an assigner.
BeliefAssigner im_necessity_assigner(const ModelSpec& spec);

/// Flat-prior posterior probability on the EIV model. Draws are seeded from
/// the data record and `seed`, so results are reproducible per record.
BeliefAssigner eiv_flat_bayes_assigner(double lambda1, double lambda2, std::size_t budget, std::uint64_t seed,
                                       PositivityHandling positivity = PositivityHandling::none);

}  // namespace possim
