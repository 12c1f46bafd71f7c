#include "possim/validity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "possim/dominance.hpp"
#include "possim/error.hpp"

namespace possim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::uint64_t kDataLane = 0;
constexpr std::uint64_t kMethodLane = 1;

}  // namespace

std::string model_name(const ModelSpec& spec) {
  return std::visit(overloaded{[](const CauchySpec&) { return std::string("cauchy"); },
                               [](const CurvedNormalSpec&) { return std::string("curved-normal"); },
                               [](const EivSpec&) { return std::string("exp-eiv"); }},
                    spec);
}

DataRecord simulate_data(const ModelSpec& spec, double theta, RandomStream& rng) {
  return std::visit(
      overloaded{[&](const CauchySpec&) { return DataRecord{theta + rng.cauchy()}; },
                 [&](const CurvedNormalSpec& s) { return simulate_curved_normal(s.model, theta, rng).record(); },
                 [&](const EivSpec& s) { return simulate_eiv(s.lambda1, s.lambda2, theta, s.xi, rng); }},
      spec);
}

PosteriorContour build_posterior(const ModelSpec& spec, const DataRecord& y) {
  return std::visit(
      overloaded{[&](const CauchySpec&) { return cauchy_posterior_contour(y.at(0)); },
                 [&](const CurvedNormalSpec& s) {
                   return curved_normal_posterior_contour(
                       s.model, CurvedNormalReduction::from_statistics(y.at(0), y.at(1)));
                 },
                 [&](const EivSpec& s) {
                   return eiv_posterior_contour(EivModel{s.lambda1, s.lambda2, y.at(0), y.at(1)});
                 }},
      spec);
}

void ReplicationPlan::validate() const {
  if (reps < 1) throw ArgumentError("replication count must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("delta must lie in (0, 1)");
  if (!std::isfinite(theta)) throw ArgumentError("true parameter must be finite");
  if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end())) throw ArgumentError("alpha grid must be sorted");
  for (double a : alpha_grid) {
    if (!(a >= 0.0 && a <= 1.0)) throw ArgumentError("alpha grid must lie in [0, 1]");
  }
  std::visit(overloaded{[](const CauchySpec&) {}, [](const CurvedNormalSpec& s) { s.model.validate(); },
                        [](const EivSpec& s) {
                          if (!(s.lambda1 > 0.0) || !(s.lambda2 > 0.0)) throw ArgumentError("rates must be positive");
                        }},
             model);
}

std::vector<double> ReplicationPlan::grid() const { return alpha_grid.empty() ? possim::alpha_grid() : alpha_grid; }

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&](std::size_t w) {
    for (std::size_t i = w; i < n; i += workers) {
      {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (failure) return;
      }
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

ValidityReport validity_cdf(const ReplicationPlan& plan, Statistic statistic,
                            const std::optional<SetDescriptor>& assertion) {
  plan.validate();
  if (statistic != Statistic::contour_at_truth && !assertion) {
    throw ArgumentError("assertion statistics need an assertion");
  }
  ValidityReport report;
  report.model = model_name(plan.model);
  report.statistic = statistic;
  report.direction = statistic == Statistic::necessity_of_assertion ? Direction::lower : Direction::upper;
  report.delta = plan.delta;
  report.values.assign(plan.reps, 0.0);

  parallel_for(plan.reps, plan.workers, [&](std::size_t i) {
    RandomStream rng = RandomStream::substream(plan.seed, i, kDataLane);
    const DataRecord y = simulate_data(plan.model, plan.theta, rng);
    const PosteriorContour post = build_posterior(plan.model, y);
    const auto on_domain = [&post](const SetDescriptor& a) {
      return restrict_to(a, as_interval(post.as_contour().domain()));
    };
    double v = 0.0;
    switch (statistic) {
      case Statistic::contour_at_truth:
        v = post(plan.theta);
        break;
      case Statistic::necessity_of_assertion:
        v = posterior_necessity(post, on_domain(*assertion));
        break;
      case Statistic::possibility_of_assertion:
        v = posterior_possibility(post, on_domain(*assertion));
        break;
    }
    report.values[i] = std::clamp(v, 0.0, 1.0);
  });

  report.alpha = plan.grid();
  report.cdf = empirical_cdf(report.values, report.alpha);
  report.band = dkw_band(plan.reps, plan.delta);
  double worst = -kInf;
  double two_sided = 0.0;
  for (std::size_t k = 0; k < report.alpha.size(); ++k) {
    const double diff = report.cdf[k] - report.alpha[k];
    worst = std::max(worst, report.direction == Direction::upper ? diff : -diff);
    two_sided = std::max(two_sided, std::abs(diff));
  }
  report.max_violation = worst + 0.0;  // folds -0 into 0
  report.pass = worst <= report.band;
  report.two_sided_distance = two_sided;
  report.two_sided_pass = two_sided <= report.band;
  return report;
}

std::string method_name(IntervalMethod method) { return method == IntervalMethod::im ? "im" : "fiducial"; }

CoverageResult coverage_study(const ReplicationPlan& plan, double level, IntervalMethod method,
                              std::size_t fiducial_budget) {
  plan.validate();
  if (!(level > 0.0 && level < 1.0)) throw ArgumentError("level must lie in (0, 1)");
  const auto* curved = std::get_if<CurvedNormalSpec>(&plan.model);
  if (method == IntervalMethod::fiducial && curved == nullptr) {
    throw UnsupportedError("fiducial intervals are available for the curved normal model only");
  }
  std::vector<char> covered(plan.reps, 0);
  std::vector<double> lengths(plan.reps, 0.0);
  parallel_for(plan.reps, plan.workers, [&](std::size_t i) {
    RandomStream rng = RandomStream::substream(plan.seed, i, kDataLane);
    const DataRecord y = simulate_data(plan.model, plan.theta, rng);
    if (method == IntervalMethod::im) {
      const PlausibilityRegion region = plausibility_region(build_posterior(plan.model, y), 1.0 - level);
      covered[i] = region.contains(plan.theta) ? 1 : 0;
      lengths[i] = region.length();
      return;
    }
    const auto r = CurvedNormalReduction::from_statistics(y.at(0), y.at(1));
    const CurvedNormalConditional conditional(curved->model, r.h);
    RandomStream draws = RandomStream::substream(plan.seed, i, kMethodLane);
    const Interval iv = curved_normal_fiducial_interval(conditional, r, level, fiducial_budget, draws);
    covered[i] = iv.contains(plan.theta) ? 1 : 0;
    lengths[i] = iv.length();
  });

  CoverageResult out;
  out.method = method;
  out.level = level;
  out.reps = plan.reps;
  out.seed = plan.seed;
  std::size_t hits = 0;
  std::size_t bounded = 0;
  double total = 0.0;
  for (std::size_t i = 0; i < plan.reps; ++i) {
    hits += static_cast<std::size_t>(covered[i]);
    if (std::isfinite(lengths[i])) {
      total += lengths[i];
      ++bounded;
    } else {
      ++out.unbounded_count;
    }
  }
  const double r = static_cast<double>(plan.reps);
  out.coverage = static_cast<double>(hits) / r;
  out.mean_length = bounded > 0 ? total / static_cast<double>(bounded) : kInf;
  out.mc_se = std::sqrt(out.coverage * (1.0 - out.coverage) / r);
  return out;
}

FalseConfidenceTable false_confidence_curves(const ReplicationPlan& plan, const SetDescriptor& assertion,
                                             const std::vector<BeliefAssigner>& assigners) {
  plan.validate();
  if (assigners.empty()) throw ArgumentError("at least one assigner is required");
  FalseConfidenceTable table;
  table.alpha = plan.grid();
  table.band = dkw_band(plan.reps, plan.delta);
  table.values.assign(assigners.size(), std::vector<double>(plan.reps, 0.0));
  for (const auto& a : assigners) table.assigners.push_back(a.name);

  parallel_for(plan.reps, plan.workers, [&](std::size_t i) {
    RandomStream rng = RandomStream::substream(plan.seed, i, kDataLane);
    const DataRecord y = simulate_data(plan.model, plan.theta, rng);
    for (std::size_t j = 0; j < assigners.size(); ++j) {
      table.values[j][i] = std::clamp(assigners[j].assign(y, assertion), 0.0, 1.0);
    }
  });
  for (const auto& v : table.values) table.cdf.push_back(empirical_cdf(v, table.alpha));
  return table;
}

BeliefAssigner im_necessity_assigner(const ModelSpec& spec) {
  return {"im", [spec](const DataRecord& y, const SetDescriptor& a) {
            const PosteriorContour post = build_posterior(spec, y);
            const SpaceDescriptor& domain = post.as_contour().domain();
            return posterior_necessity(post, is_interval(domain) ? restrict_to(a, as_interval(domain)) : a);
          }};
}

BeliefAssigner eiv_flat_bayes_assigner(double lambda1, double lambda2, std::size_t budget, std::uint64_t seed,
                                       PositivityHandling positivity) {
  return {"bayes", [=](const DataRecord& y, const SetDescriptor& a) {
            std::uint64_t key = mix64(seed);
            for (double v : y) key = mix64(key ^ std::bit_cast<std::uint64_t>(v));
            RandomStream rng(key);
            const EivModel model{lambda1, lambda2, y.at(0), y.at(1)};
            auto contains = [&a](double phi) {
              if (const auto* u = std::get_if<IntervalUnion>(&a)) return u->contains(phi);
              const auto& pts = std::get<PointSet>(a).points;
              return std::find(pts.begin(), pts.end(), phi) != pts.end();
            };
            return eiv_flat_bayes_probability(model, contains, budget, rng, positivity);
          }};
}

}  // namespace possim
