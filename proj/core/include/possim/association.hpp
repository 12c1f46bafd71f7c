#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "possim/contour.hpp"
#include "possim/distribution.hpp"
#include "possim/space.hpp"

namespace possim {

/// The relation a(y, theta, u) = 0 between data, parameter and auxiliary
/// variable, given as forward simulation plus solvers.
struct Association {
  using SolveU = std::function<std::vector<Point>(const DataRecord& y, std::span<const double> theta)>;
  using SolveTheta = std::function<Point(const DataRecord& y, std::span<const double> u)>;
  using Simulate = std::function<DataRecord(std::span<const double> theta, std::span<const double> u)>;

  std::string name;
  AuxiliaryDistribution aux;
  SpaceDescriptor param_domain = Interval::real_line();
  /// All u with a(y, theta, u) = 0; usually a single point, possibly empty.
  SolveU solve_u;
  /// theta_{y,u}, when the association can be solved for the parameter.
  SolveTheta solve_theta;
  Simulate simulate;

  bool has_solve_theta() const { return static_cast<bool>(solve_theta); }
};

/// Shape information a model supplies about its posterior contour.
struct ContourHints {
  ContourShape shape = ContourShape::general;
  std::optional<double> mode;
  std::optional<double> scale;
};

/// theta -> sup of a base contour over the solutions u_{y,theta}.
class PosteriorContour {
 public:
  struct Value {
    double value = 0.0;
    /// True when no u solves the association at this theta (value is then 0).
    bool solution_empty = false;
  };
  using Eval1d = std::function<double(double)>;

  /// Generic route through an association and a base contour on its
  /// auxiliary space.
  PosteriorContour(Association assoc, DataRecord y, PossibilityContour base, ContourHints hints = {});

  /// Closed-form route for models whose posterior contour is known
  /// analytically on a 1-D parameter interval.
  PosteriorContour(std::string model, DataRecord y, Interval param_domain, Eval1d eval, ContourHints hints);

  Value evaluate(std::span<const double> theta) const;
  double operator()(double theta) const;

  const DataRecord& data() const { return y_; }
  const std::string& model() const { return model_; }
  const std::optional<Association>& association() const { return assoc_; }
  const std::optional<PossibilityContour>& base() const { return base_; }
  /// The posterior as a contour on the parameter space, for measures and cuts.
  const PossibilityContour& as_contour() const { return *contour_; }
  /// Number of evaluations so far that met an empty solution set.
  std::size_t empty_solution_count() const { return empty_count_->load(); }

 private:
  std::string model_;
  DataRecord y_;
  std::optional<Association> assoc_;
  std::optional<PossibilityContour> base_;
  std::shared_ptr<const PossibilityContour> contour_;
  std::shared_ptr<std::atomic<std::size_t>> empty_count_;
};

struct PlausibilityRegion {
  double alpha = 0.0;
  IntervalUnion set;

  bool bounded() const { return set.bounded(); }
  bool contains(double theta) const { return set.contains(theta); }
  double length() const { return set.length(); }
};

struct TestResult {
  bool reject = false;
  double attained = 0.0;
};

PosteriorContour posterior_contour(const Association& assoc, const DataRecord& y, const PossibilityContour& base,
                                   ContourHints hints = {});

double posterior_possibility(const PosteriorContour& post, const SetDescriptor& a);
double posterior_necessity(const PosteriorContour& post, const SetDescriptor& a);

/// {theta : pi_y(theta) > alpha}; unbounded sides come from tail limits at
/// the horizon.
PlausibilityRegion plausibility_region(const PosteriorContour& post, double alpha);

/// Rejects A iff its posterior possibility is at most alpha.
TestResult hypothesis_test(const PosteriorContour& post, const SetDescriptor& a, double alpha);

}  // namespace possim
