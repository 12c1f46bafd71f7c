#include "possim/association.hpp"

#include <algorithm>

#include "possim/error.hpp"
#include "possim/measure.hpp"

namespace possim {

namespace {

void apply_hints(PossibilityContour& c, const ContourHints& hints) {
  if (hints.scale) c.set_scale(*hints.scale);
}

bool in_domain(const SpaceDescriptor& domain, std::span<const double> theta) {
  if (const auto* iv = std::get_if<Interval>(&domain)) return theta.size() == 1 && iv->contains(theta[0]);
  if (const auto* p = std::get_if<ProductSpace>(&domain)) {
    if (theta.size() != p->factors.size()) return false;
    for (std::size_t j = 0; j < theta.size(); ++j) {
      if (!p->factors[j].contains(theta[j])) return false;
    }
    return true;
  }
  const auto& f = std::get<FiniteSpace>(domain);
  return theta.size() == 1 && theta[0] >= 0.0 && theta[0] < static_cast<double>(f.labels.size());
}

}  // namespace

PosteriorContour::PosteriorContour(Association assoc, DataRecord y, PossibilityContour base, ContourHints hints)
    : model_(assoc.name), y_(std::move(y)), empty_count_(std::make_shared<std::atomic<std::size_t>>(0)) {
  if (!assoc.solve_u) throw ArgumentError("association needs solve_u");
  assoc_ = std::move(assoc);
  base_ = std::move(base);
  auto solve = assoc_->solve_u;
  auto b = std::make_shared<const PossibilityContour>(*base_);
  auto data = y_;
  auto domain = assoc_->param_domain;
  auto counter = empty_count_;
  std::optional<Point> mode;
  if (hints.mode) mode = Point{*hints.mode};
  auto c = std::make_shared<PossibilityContour>(
      domain,
      [solve, b, data, domain, counter](std::span<const double> theta) {
        if (!in_domain(domain, theta)) throw DomainError("parameter value outside the model's parameter domain");
        const auto us = solve(data, theta);
        if (us.empty()) {
          counter->fetch_add(1, std::memory_order_relaxed);
          return 0.0;
        }
        double best = 0.0;
        for (const auto& u : us) best = std::max(best, (*b)(std::span<const double>(u)));
        return best;
      },
      hints.shape, mode);
  apply_hints(*c, hints);
  contour_ = std::move(c);
}

PosteriorContour::PosteriorContour(std::string model, DataRecord y, Interval param_domain, Eval1d eval,
                                   ContourHints hints)
    : model_(std::move(model)), y_(std::move(y)), empty_count_(std::make_shared<std::atomic<std::size_t>>(0)) {
  auto c = std::make_shared<PossibilityContour>(PossibilityContour::on_interval(
      param_domain,
      [eval = std::move(eval), param_domain](double theta) {
        if (!param_domain.contains(theta)) throw DomainError("parameter value outside the model's parameter domain");
        return eval(theta);
      },
      hints.shape, hints.mode));
  apply_hints(*c, hints);
  contour_ = std::move(c);
}

PosteriorContour::Value PosteriorContour::evaluate(std::span<const double> theta) const {
  if (!assoc_) return {(*contour_)(theta), false};
  const auto us = assoc_->solve_u(y_, theta);
  if (us.empty()) {
    if (!in_domain(assoc_->param_domain, theta)) throw DomainError("parameter value outside the model's parameter domain");
    empty_count_->fetch_add(1, std::memory_order_relaxed);
    return {0.0, true};
  }
  return {(*contour_)(theta), false};
}

double PosteriorContour::operator()(double theta) const { return (*contour_)(theta); }

PosteriorContour posterior_contour(const Association& assoc, const DataRecord& y, const PossibilityContour& base,
                                   ContourHints hints) {
  if (dimension(base.domain()) != assoc.aux.dim()) {
    throw ArgumentError("base contour is not defined on the association's auxiliary space");
  }
  return PosteriorContour(assoc, y, base, hints);
}

double posterior_possibility(const PosteriorContour& post, const SetDescriptor& a) {
  return eval_possibility(post.as_contour(), a);
}

double posterior_necessity(const PosteriorContour& post, const SetDescriptor& a) {
  return necessity_of(post.as_contour(), a);
}

PlausibilityRegion plausibility_region(const PosteriorContour& post, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0, 1)");
  return {alpha, level_set(post.as_contour(), alpha, true)};
}

TestResult hypothesis_test(const PosteriorContour& post, const SetDescriptor& a, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0, 1)");
  const double attained = posterior_possibility(post, a);
  return {attained <= alpha, attained};
}

}  // namespace possim
