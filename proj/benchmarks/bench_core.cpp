#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "possim/association.hpp"
#include "possim/contour.hpp"
#include "possim/credal.hpp"
#include "possim/distribution.hpp"
#include "possim/measure.hpp"
#include "possim/models.hpp"
#include "possim/randomset.hpp"

namespace {

using namespace possim;

void BM_ClosedFormContour(benchmark::State& state) {
  for (auto _ : state) {
    auto c = build_max_specificity(normal_distribution(), BuildMethod::closed_form);
    benchmark::DoNotOptimize(c(0.7));
  }
}
BENCHMARK(BM_ClosedFormContour);

void BM_MonteCarloContour(benchmark::State& state) {
  const auto budget = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto c = build_max_specificity(normal_distribution(), BuildMethod::monte_carlo, budget);
    benchmark::DoNotOptimize(c(0.7));
  }
}
BENCHMARK(BM_MonteCarloContour)->Arg(10000)->Arg(100000);

void BM_CurvedNormalConditional(benchmark::State& state) {
  CurvedNormalModel model;
  for (auto _ : state) {
    CurvedNormalConditional cond(model, 1.0);
    benchmark::DoNotOptimize(cond.contour(0.1));
  }
}
BENCHMARK(BM_CurvedNormalConditional);

void BM_CurvedNormalRegion(benchmark::State& state) {
  CurvedNormalModel model;
  auto r = CurvedNormalReduction::from_statistics(2.0, 2.0);
  auto cond = std::make_shared<const CurvedNormalConditional>(model, r.h);
  auto post = curved_normal_posterior_contour(cond, r);
  for (auto _ : state) benchmark::DoNotOptimize(plausibility_region(post, 0.05).length());
}
BENCHMARK(BM_CurvedNormalRegion);

void BM_CauchyPossibility(benchmark::State& state) {
  auto post = cauchy_posterior_contour(1.5);
  SetDescriptor a = IntervalUnion{Interval::closed(-3.0, -1.0), Interval::closed(4.0, 6.0)};
  for (auto _ : state) benchmark::DoNotOptimize(posterior_possibility(post, a));
}
BENCHMARK(BM_CauchyPossibility);

void BM_EivRegion(benchmark::State& state) {
  EivModel model{5.0, 5.0, 1.0, 0.3};
  auto post = eiv_posterior_contour(model);
  for (auto _ : state) benchmark::DoNotOptimize(plausibility_region(post, 0.1).length());
}
BENCHMARK(BM_EivRegion);

void BM_HittingProbability(benchmark::State& state) {
  NestedRandomSetSampler sampler(normal_distribution());
  auto thresholds = sampler.draw_thresholds(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(hitting_probability(sampler, 0.8, thresholds));
}
BENCHMARK(BM_HittingProbability)->Arg(100000);

void BM_CredalMembership(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  DiscreteCredalInstance inst;
  for (std::size_t i = 0; i < n; ++i) {
    inst.atoms.push_back("a" + std::to_string(i));
    inst.probs.push_back(1.0 / static_cast<double>(n));
    inst.contour_values.push_back(i == 0 ? 1.0 : 1.0 - static_cast<double>(i) / static_cast<double>(n));
  }
  for (auto _ : state) benchmark::DoNotOptimize(credal_membership(inst).member);
}
BENCHMARK(BM_CredalMembership)->Arg(12)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
