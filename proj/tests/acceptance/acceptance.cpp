// Acceptance suite: one PASS/FAIL line per primary criterion, with the
// measured values and tolerances. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "credal_oracle.hpp"
#include "oracles.hpp"
#include "possim/baselines.hpp"
#include "possim/credal.hpp"
#include "possim/dominance.hpp"
#include "possim/measure.hpp"
#include "possim/models.hpp"
#include "possim/randomset.hpp"
#include "possim/validity.hpp"
#include "possim_cli/dataset.hpp"

using namespace possim;

namespace {

constexpr std::uint64_t kSeed = 20240601;
constexpr double kDelta = 0.01;

// Bayes CDF at alpha = 0.5 from an independent 10^4-replicate run.
constexpr double kBayesCdfAtHalf = 0.0122;
constexpr double kBayesCdfOracleReps = 1e4;

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ReplicationPlan plan_for(ModelSpec spec, double theta, std::size_t reps, std::size_t workers = 0) {
  ReplicationPlan p;
  p.model = std::move(spec);
  p.theta = theta;
  p.reps = reps;
  p.seed = kSeed;
  p.delta = kDelta;
  p.workers = workers;
  return p;
}

const SetDescriptor kPhiAtMost9 = IntervalUnion{Interval{-kInf, 9.0, false, false}};

// ------------------------------------------------------------------ coverage

void coverage_criterion() {
  const auto plan = plan_for(CurvedNormalSpec{}, 2.0, 1000);
  const auto im = coverage_study(plan, 0.95, IntervalMethod::im);
  const auto fid = coverage_study(plan, 0.95, IntervalMethod::fiducial, 4000);
  const bool pass = im.coverage >= 0.94 && im.coverage <= 0.975 && im.mean_length >= 1.67 &&
                    im.mean_length <= 1.97 && im.unbounded_count == 0 && fid.coverage < 0.95;
  report("curved-normal coverage", pass,
         "im coverage " + fmt("%.4f", im.coverage) + " in [0.94, 0.975], im mean length " +
             fmt("%.4f", im.mean_length) + " in [1.67, 1.97], fiducial coverage " + fmt("%.4f", fid.coverage) +
             " < 0.95 (fiducial mean length " + fmt("%.4f", fid.mean_length) + ")");
}

// ------------------------------------------------------------------ validity

void validity_criterion() {
  struct Case {
    ModelSpec spec;
    double theta;
  };
  const std::vector<Case> cases{{CauchySpec{}, 0.0}, {CurvedNormalSpec{}, 2.0}, {EivSpec{}, 10.0}};
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto r = validity_cdf(plan_for(c.spec, c.theta, 2000), Statistic::contour_at_truth);
    const bool two_sided = !std::holds_alternative<CauchySpec>(c.spec) || r.two_sided_pass;
    pass = pass && r.pass && two_sided;
    detail += r.model + " max(CDF-alpha) " + fmt("%.4f", r.max_violation) + " <= band " + fmt("%.4f", r.band);
    if (std::holds_alternative<CauchySpec>(c.spec)) {
      detail += ", two-sided " + fmt("%.4f", r.two_sided_distance);
    }
    detail += "; ";
  }
  report("validity R=2000", pass, detail.substr(0, detail.size() - 2));
}

// ------------------------------------------------------------------ false confidence

void false_confidence_criterion() {
  const auto plan = plan_for(EivSpec{5.0, 5.0, 0.1}, 10.0, 1000);
  const auto table = false_confidence_curves(
      plan, kPhiAtMost9, {im_necessity_assigner(plan.model), eiv_flat_bayes_assigner(5.0, 5.0, 20000, kSeed)});
  double im_below = 0.0;
  for (std::size_t k = 0; k < table.alpha.size(); ++k) im_below = std::max(im_below, table.alpha[k] - table.cdf[0][k]);
  const double bayes_half = table.cdf[1][500];
  const double gap = 0.5 - bayes_half;
  const double oracle_tol = 3.0 * std::sqrt(kBayesCdfAtHalf * (1 - kBayesCdfAtHalf) / 1000.0 +
                                            kBayesCdfAtHalf * (1 - kBayesCdfAtHalf) / kBayesCdfOracleReps);
  const bool pass = im_below <= table.band && gap > 5.0 * table.band &&
                    std::abs(bayes_half - kBayesCdfAtHalf) <= oracle_tol;
  report("false confidence", pass,
         "im max(alpha-CDF) " + fmt("%.4f", im_below) + " <= band " + fmt("%.4f", table.band) +
             ", bayes CDF(0.5) " + fmt("%.4f", bayes_half) + " gap " + fmt("%.4f", gap) + " > 5 bands " +
             fmt("%.4f", 5.0 * table.band) + ", oracle " + fmt("%.4f", kBayesCdfAtHalf) + " +/- " +
             fmt("%.4f", oracle_tol));
}

// ------------------------------------------------------------------ analytic spot checks

void analytic_criterion() {
  bool pass = true;
  std::string detail;

  const auto cauchy = cauchy_posterior_contour(0.0);
  const bool half = cauchy(1.0) == 0.5;
  pass = pass && half;
  detail += "pi_0(1) = " + fmt("%.17g", cauchy(1.0));

  const auto region = plausibility_region(cauchy, 0.05);
  const double edge = std::tan(0.475 * std::numbers::pi);
  const bool region_ok = region.set.intervals().size() == 1 &&
                         std::abs(region.set.intervals()[0].lo + 12.706) <= 1e-2 &&
                         std::abs(region.set.intervals()[0].hi - 12.706) <= 1e-2 &&
                         std::abs(region.set.intervals()[0].hi - edge) <= 1e-6;
  pass = pass && region_ok;
  detail += "; 95% region (" + fmt("%.6f", region.set.intervals().front().lo) + ", " +
            fmt("%.6f", region.set.intervals().back().hi) + ")";

  const EivModel eiv{5.0, 5.0, 1.40, 0.50};
  const double limit = 2.0 * std::exp(-5.0 * 0.50);
  const double far = eiv_contour_value(eiv, 1e9);
  const bool limit_ok = std::abs(far - limit) <= 1e-6 && std::abs(eiv_tail_limit(eiv) - limit) <= 1e-6;
  const auto post = eiv_posterior_contour(eiv);
  const bool r10 = !plausibility_region(post, 0.10).bounded();
  const bool r20 = plausibility_region(post, 0.20).bounded();
  pass = pass && limit_ok && r10 && r20;
  detail += "; EIV tail " + fmt("%.8f", far) + " vs " + fmt("%.8f", limit) + ", alpha=0.10 " +
            (r10 ? "unbounded" : "BOUNDED") + ", alpha=0.20 " + (r20 ? "bounded" : "UNBOUNDED");

  double worst = 0.0;
  for (double phi : {0.5, 2.0, 10.0}) {
    RandomStream rng(kSeed + static_cast<std::uint64_t>(phi * 10));
    const std::size_t draws = 1000000;
    std::vector<double> x(draws);
    for (auto& v : x) v = rng.exponential(5.0) - phi * rng.exponential(5.0);
    std::sort(x.begin(), x.end());
    for (std::size_t i = 0; i < draws; ++i) {
      const double g = eiv_difference_cdf(5.0, 5.0, phi, x[i]);
      worst = std::max({worst, std::abs(g - double(i) / draws), std::abs(g - double(i + 1) / draws)});
    }
  }
  pass = pass && worst <= 0.002;
  detail += "; asymmetric Laplace sup|G - ECDF| " + fmt("%.5f", worst) + " <= 0.002";
  report("analytic spot checks", pass, detail);
}

// ------------------------------------------------------------------ equivalence

struct EquivalenceModel {
  std::string name;
  std::shared_ptr<NestedRandomSetSampler> sampler;
  std::function<double(double)> base;  // max-specificity contour on the auxiliary space
  double grid_lo, grid_hi;
  Association assoc;
  DataRecord y;
  std::shared_ptr<PosteriorContour> post;
  ContourHints hints;
  double theta_lo, theta_hi;  // range for random assertions
};

std::vector<EquivalenceModel> equivalence_models() {
  std::vector<EquivalenceModel> models;

  {
    const auto dist = cauchy_distribution();
    auto pi = std::make_shared<PossibilityContour>(build_max_specificity(dist, BuildMethod::closed_form));
    models.push_back({"cauchy", std::make_shared<NestedRandomSetSampler>(dist),
                      [pi](double u) { return (*pi)(u); }, -10.0, 10.0, cauchy_association(), DataRecord{0.0},
                      std::make_shared<PosteriorContour>(cauchy_posterior_contour(0.0)),
                      ContourHints{ContourShape::unimodal, 0.0, 1.0}, -15.0, 15.0});
  }
  {
    const CurvedNormalModel model{};
    const auto r = CurvedNormalReduction::from_statistics(1.86, 2.12);
    auto cond = std::make_shared<const CurvedNormalConditional>(model, r.h);
    auto post = std::make_shared<PosteriorContour>(curved_normal_posterior_contour(cond, r));
    const double m = cond->mode(), w = 4.0 * cond->spread();
    const ContourHints hints{ContourShape::unimodal, r.y1 - r.y2 * m, r.y2 * cond->spread()};
    models.push_back({"curved-normal", std::make_shared<NestedRandomSetSampler>(cond->as_distribution()),
                      [cond](double v) { return cond->contour(v); }, m - w, m + w,
                      curved_normal_conditional_association(cond, r), r.record(), post, hints, 0.05, 6.0});
  }
  {
    auto tri = std::make_shared<PossibilityContour>(build_triangular());
    const EivModel eiv{5.0, 5.0, 1.40, 0.50};
    auto post = std::make_shared<PosteriorContour>(eiv_posterior_contour(eiv));
    models.push_back({"exp-eiv",
                      std::make_shared<NestedRandomSetSampler>(uniform_distribution(),
                                                               [tri](double u) { return (*tri)(u); }, 0.5),
                      [tri](double u) { return (*tri)(u); }, 0.0, 1.0, eiv_marginal_association(5.0, 5.0),
                      eiv.record(), post, ContourHints{}, 0.05, 40.0});
  }
  return models;
}

void equivalence_criterion() {
  const std::size_t budget = 100000;
  bool pass = true;
  std::string detail;
  for (const auto& m : equivalence_models()) {
    const auto thresholds = m.sampler->draw_thresholds(budget, kSeed);

    double worst_hit = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const double u = m.grid_lo + (m.grid_hi - m.grid_lo) * k / 100.0;
      const double p = m.base(u);
      const double se = std::max(mc_standard_error(p, budget), 1.0 / budget);
      worst_hit = std::max(worst_hit, std::abs(hitting_probability(*m.sampler, u, thresholds) - p) / se);
    }

    RandomStream rng(kSeed ^ std::hash<std::string>{}(m.name));
    double worst_pl = 0.0, worst_bel = 0.0;
    std::size_t empty = 0;
    for (int trial = 0; trial < 50; ++trial) {
      double a = m.theta_lo + (m.theta_hi - m.theta_lo) * rng.uniform();
      double b = m.theta_lo + (m.theta_hi - m.theta_lo) * rng.uniform();
      if (a > b) std::swap(a, b);
      // Every fifth assertion is a half-line.
      if (trial % 5 == 4) b = kInf;
      const SetDescriptor A = IntervalUnion{Interval::closed(a, b)};

      const auto pl = randomset_plausibility(*m.sampler, m.assoc, m.y, A, thresholds, m.hints);
      const double pp = posterior_possibility(*m.post, A);
      worst_pl = std::max(worst_pl, std::abs(pl.value - pp) / std::max(mc_standard_error(pp, pl.used), 1.0 / budget));

      const auto domain = as_interval(m.post->as_contour().domain());
      const SetDescriptor Ac = std::get<IntervalUnion>(A).complement_within(domain);
      const auto pl_c = randomset_plausibility(*m.sampler, m.assoc, m.y, Ac, thresholds, m.hints);
      const double bel = 1.0 - pl_c.value;
      const double nec = posterior_necessity(*m.post, A);
      worst_bel = std::max(worst_bel, std::abs(bel - nec) / std::max(mc_standard_error(nec, pl_c.used), 1.0 / budget));
      empty += pl.empty_count + pl_c.empty_count;
    }
    const bool ok = worst_hit <= 3.0 && worst_pl <= 3.0 && worst_bel <= 3.0 && empty == 0;
    pass = pass && ok;
    detail += m.name + " max|z| hitting " + fmt("%.2f", worst_hit) + ", plausibility " + fmt("%.2f", worst_pl) +
              ", belief " + fmt("%.2f", worst_bel) + ", empty " + std::to_string(empty) + "; ";
  }
  report("equivalence (3 MC SE)", pass, detail.substr(0, detail.size() - 2));
}

// ------------------------------------------------------------------ credal oracle

void credal_criterion() {
  RandomStream rng(kSeed);
  std::vector<DiscreteCredalInstance> instances;
  for (int i = 0; i < 200; ++i) instances.push_back(oracle::random_credal_instance(rng));
  const auto start = std::chrono::steady_clock::now();
  int agree = 0, members = 0;
  for (const auto& inst : instances) {
    const bool fast = credal_membership(inst).member;
    const bool brute = oracle::credal_brute_force(inst);
    agree += fast == brute;
    members += brute;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report("credal oracle", agree == 200 && seconds < 10.0,
         std::to_string(agree) + "/200 agree (" + std::to_string(members) + " members), " + fmt("%.3f", seconds) +
             " s < 10 s");
}

// ------------------------------------------------------------------ determinism

std::string validity_csv(const ValidityReport& r) {
  std::vector<cli::Row> rows;
  for (std::size_t k = 0; k < r.alpha.size(); ++k) rows.push_back({r.alpha[k], r.cdf[k], r.band});
  for (double v : r.values) rows.push_back({v, v, v});
  return cli::to_csv(cli::validity_schema(), rows);
}

std::string fc_csv(const FalseConfidenceTable& t) {
  std::vector<cli::Row> rows;
  for (std::size_t j = 0; j < t.assigners.size(); ++j) {
    for (std::size_t k = 0; k < t.alpha.size(); ++k) rows.push_back({t.alpha[k], t.assigners[j], t.cdf[j][k]});
  }
  return cli::to_csv(cli::false_confidence_schema(), rows);
}

std::string coverage_csv(const CoverageResult& r) {
  return cli::to_csv(cli::coverage_schema(), {{method_name(r.method), r.level, r.coverage, r.mean_length,
                                               std::uint64_t{r.unbounded_count}, r.mc_se, std::uint64_t{r.reps},
                                               r.seed}});
}

void determinism_criterion() {
  std::vector<std::string> runs;
  for (std::size_t workers : {1, 3, 8}) {
    std::string out;
    out += validity_csv(validity_cdf(plan_for(CauchySpec{}, 0.0, 2000, workers), Statistic::contour_at_truth));
    out += validity_csv(validity_cdf(plan_for(EivSpec{}, 10.0, 500, workers), Statistic::contour_at_truth));
    const auto plan = plan_for(EivSpec{}, 10.0, 300, workers);
    out += fc_csv(false_confidence_curves(plan, kPhiAtMost9,
                                          {im_necessity_assigner(plan.model), eiv_flat_bayes_assigner(5, 5, 5000, kSeed)}));
    const auto cn = plan_for(CurvedNormalSpec{}, 2.0, 300, workers);
    out += coverage_csv(coverage_study(cn, 0.95, IntervalMethod::im));
    out += coverage_csv(coverage_study(cn, 0.95, IntervalMethod::fiducial, 1000));
    runs.push_back(std::move(out));
  }
  const bool same = runs[0] == runs[1] && runs[1] == runs[2];
  report("determinism", same,
         std::string(same ? "identical" : "DIFFERENT") + " output for workers 1, 3, 8 (" +
             std::to_string(runs[0].size()) + " bytes each)");
}

}  // namespace

int main() {
  coverage_criterion();
  validity_criterion();
  false_confidence_criterion();
  analytic_criterion();
  equivalence_criterion();
  credal_criterion();
  determinism_criterion();
  std::printf("%d of 7 criteria failed\n", failures);
  return failures;
}
