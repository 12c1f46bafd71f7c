#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "possim/dominance.hpp"
#include "possim/error.hpp"
#include "possim/models.hpp"
#include "possim/random.hpp"

using namespace possim;

namespace {

// Trapezoid integral of a density over v < h (sign +1) or v > h (sign -1),
// in the coordinate t = log|h - v| where the mass is well spread.
double integrate_density(const CurvedNormalConditional& c) {
  const double h = c.h();
  const double s = c.model().sign;
  double total = 0.0;
  const double lo = -40.0, hi = 40.0;
  const int n = 800000;
  const double dt = (hi - lo) / n;
  for (int i = 0; i <= n; ++i) {
    const double t = lo + i * dt;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    total += w * c.density(h - s * std::exp(t)) * std::exp(t);
  }
  return total * dt;
}

}  // namespace

TEST_CASE("Cauchy posterior contour") {
  CHECK(cauchy_posterior_contour(0.0)(0.0) == 1.0);
  CHECK(std::abs(cauchy_posterior_contour(0.0)(1.0) - 2.0 * (1.0 - oracle::cauchy_cdf(1.0))) < 1e-15);
  CHECK(cauchy_posterior_contour(0.0)(1.0) == 0.5);
  CHECK(cauchy_posterior_contour(3.0)(3.0) == 1.0);
  CHECK(cauchy_contour_value(2.0, 5.0) == cauchy_posterior_contour(2.0)(5.0));
}

TEST_CASE("curved-normal reduction") {
  const auto r = CurvedNormalReduction::from_statistics(1.86, 2.12);
  CHECK(std::round(r.h * 100.0) / 100.0 == doctest::Approx(0.88));

  const std::vector<double> pair{0.0, 2.0};
  const auto p = curved_normal_reduce(pair);
  CHECK(p.y1 == doctest::Approx(1.0));
  CHECK(p.y2 == doctest::Approx(std::sqrt(2.0)));
  CHECK(p.h == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(p.h - p.y1 / p.y2) < 1e-12);

  const std::vector<double> flat{3.0, 3.0, 3.0};
  CHECK_THROWS_AS(curved_normal_reduce(flat), DegenerateDataError);
  CHECK_THROWS_AS(curved_normal_reduce(std::vector<double>{1.0}), ArgumentError);
}

TEST_CASE("curved-normal conditional density normalizes to one") {
  for (auto form : {DensityForm::reference, DensityForm::exact_jacobian}) {
    for (int n : {3, 10, 40}) {
      for (int sign : {1, -1}) {
        for (double h : {-1.5, 0.0, 0.88, 3.0}) {
          const CurvedNormalConditional c({n, sign, form}, h);
          CHECK(std::abs(integrate_density(c) - 1.0) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("curved-normal conditional density at the reference instance") {
  const CurvedNormalConditional c({10, 1, DensityForm::reference}, 0.88);
  CHECK(c.support().hi == 0.88);
  CHECK(c.density(0.88 + 1e-3) == 0.0);
  // The (1/(h-v))^2 term drives the density to 0 at the edge.
  double prev = c.density(0.88 - 0.5);
  for (double gap : {0.3, 0.2, 0.15, 0.1}) {
    const double d = c.density(0.88 - gap);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(c.density(0.88 - 0.01) < 1e-12);

  const double m = c.mode();
  CHECK(c.cdf(m) > 0.0);
  CHECK(c.cdf(m) < 1.0);

  // Grid-scan oracle: one sign change of the slope on 4096 points.
  std::vector<double> d;
  for (int i = 0; i < 4096; ++i) d.push_back(c.density(m - 6.0 + 6.5 * i / 4095.0));
  int turns = 0;
  for (std::size_t i = 2; i < d.size(); ++i) {
    if ((d[i] - d[i - 1] < 0) != (d[i - 1] - d[i - 2] < 0) && d[i - 1] > 1e-300) ++turns;
  }
  CHECK(turns == 1);
  CHECK(c.unimodal());
}

TEST_CASE("quantile inverts the CDF") {
  for (int sign : {1, -1}) {
    const CurvedNormalConditional c({10, sign, DensityForm::reference}, sign * 0.88);
    for (double p : {0.001, 0.1, 0.5, 0.9, 0.999}) CHECK(std::abs(c.cdf(c.quantile(p)) - p) < 1e-8);
  }
}

TEST_CASE("exact-Jacobian density matches Monte Carlo conditioning on eta") {
  // Draw U, keep draws with eta(U) near h, and compare the law of V = U1/U2.
  const int n = 10;
  const double h = 0.88, eps = 0.01;
  const CurvedNormalConditional c({n, 1, DensityForm::exact_jacobian}, h);
  RandomStream rng(2718);
  std::vector<double> kept;
  for (int i = 0; i < 4000000; ++i) {
    const double u1 = rng.normal() / std::sqrt(double(n));
    const double u2 = std::sqrt(rng.chi_squared(n - 1) / (n - 1));
    const double eta = (1.0 + u1) / u2;
    if (std::abs(eta - h) < eps) kept.push_back(u1 / u2);
  }
  REQUIRE(kept.size() > 20000);
  std::sort(kept.begin(), kept.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const double f = c.cdf(kept[i]);
    ks = std::max({ks, std::abs(f - double(i) / kept.size()), std::abs(f - double(i + 1) / kept.size())});
  }
  CHECK(ks < 2.0 * dkw_band(kept.size(), 0.01));

  // The printed form is a different law; the same sample tells them apart.
  const CurvedNormalConditional ref({n, 1, DensityForm::reference}, h);
  double ks_ref = 0.0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    ks_ref = std::max(ks_ref, std::abs(ref.cdf(kept[i]) - double(i) / kept.size()));
  }
  CHECK(ks_ref > 5.0 * dkw_band(kept.size(), 0.01));
}

TEST_CASE("pi_h at conditional draws is uniform") {
  const std::size_t draws = 10000;
  for (auto form : {DensityForm::reference, DensityForm::exact_jacobian}) {
    const CurvedNormalConditional c({10, 1, form}, 0.88);
    RandomStream rng(31);
    std::vector<double> values(draws);
    for (auto& v : values) v = c.contour(c.sample(rng));
    CHECK(ks_distance_uniform(values) <= dkw_band(draws, 0.01));
  }
}

TEST_CASE("curved-normal posterior contour") {
  const CurvedNormalModel model{};
  const auto r = CurvedNormalReduction::from_statistics(1.86, 2.12);
  const auto post = curved_normal_posterior_contour(model, r);
  const auto mode = post.as_contour().mode_1d();
  REQUIRE(mode.has_value());
  CHECK(post(*mode) > 1.0 - 1e-6);
  CHECK(post(*mode) <= 1.0);
  CHECK_THROWS_AS(post(-1.0), DomainError);

  const auto region = plausibility_region(post, 0.05);
  CHECK(region.bounded());
  CHECK(region.contains(2.0));
}

TEST_CASE("eta(u_{y,theta}) equals h for every theta with the assumed sign") {
  for (int sign : {1, -1}) {
    const CurvedNormalModel model{10, sign};
    const auto assoc = curved_normal_association(model);
    const auto r = CurvedNormalReduction::from_statistics(sign * 1.86, 2.12);
    for (double t = 0.05; t < 20.0; t += 0.05) {
      const double theta = sign * t;
      const auto u = assoc.solve_u(r.record(), std::span<const double>(&theta, 1));
      REQUIRE(u.size() == 1);
      CHECK(std::abs(curved_normal_eta(sign, u[0]) - r.h) < 1e-10);
    }
    const double wrong = -sign * 1.0;
    CHECK(assoc.solve_u(r.record(), std::span<const double>(&wrong, 1)).empty());
  }
}

TEST_CASE("n = 2 with the printed density cannot be normalized") {
  CHECK_THROWS_AS(CurvedNormalConditional({2, 1, DensityForm::reference}, 0.5), NumericError);
  CHECK_NOTHROW(CurvedNormalConditional({2, 1, DensityForm::exact_jacobian}, 0.5));
  CHECK_THROWS_AS(CurvedNormalModel({1, 1}).validate(), ArgumentError);
}

TEST_CASE("curved-normal simulation has the sampling law of mean and sd") {
  RandomStream rng(8);
  const CurvedNormalModel model{};
  double m1 = 0.0, m2 = 0.0;
  const int reps = 200000;
  for (int i = 0; i < reps; ++i) {
    const auto r = simulate_curved_normal(model, 2.0, rng);
    m1 += r.y1;
    m2 += r.y2 * r.y2;
  }
  // E Y1 = theta, Var Y1 = theta^2 / n; E Y2^2 = theta^2.
  CHECK(std::abs(m1 / reps - 2.0) < 4.0 * std::sqrt(0.4 / reps));
  CHECK(std::abs(m2 / reps - 4.0) < 0.03);
}

TEST_CASE("asymmetric Laplace CDF") {
  CHECK(asymmetric_laplace_cdf(5.0, 0.5, 0.0) == doctest::Approx(5.0 / 5.5).epsilon(1e-15));
  CHECK(asymmetric_laplace_cdf(5.0, 0.5, -1e-300) == doctest::Approx(5.0 / 5.5).epsilon(1e-15));
  CHECK(std::abs(asymmetric_laplace_cdf(5.0, 0.5, -3.6) - 5.0 / 5.5 * std::exp(-1.8)) < 1e-15);
  CHECK(std::abs(asymmetric_laplace_cdf(5.0, 0.5, -3.6) - 0.1503) < 1e-4);
  CHECK(asymmetric_laplace_cdf(5.0, 0.5, 1e3) == 1.0);
  CHECK(asymmetric_laplace_cdf(5.0, 0.5, -1e4) == 0.0);
  for (double p : {1e-6, 0.2, 0.5, 0.9, 1 - 1e-6}) {
    CHECK(std::abs(asymmetric_laplace_cdf(2.0, 0.7, asymmetric_laplace_quantile(2.0, 0.7, p)) - p) < 1e-12);
  }
}

TEST_CASE("G_phi matches the empirical CDF of U1 - phi U2") {
  const std::size_t draws = 1000000;
  for (double phi : {0.5, 2.0, 10.0}) {
    RandomStream rng(static_cast<std::uint64_t>(phi * 100));
    std::vector<double> x(draws);
    for (auto& v : x) v = rng.exponential(5.0) - phi * rng.exponential(5.0);
    std::sort(x.begin(), x.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
      const double g = eiv_difference_cdf(5.0, 5.0, phi, x[i]);
      ks = std::max({ks, std::abs(g - double(i) / draws), std::abs(g - double(i + 1) / draws)});
    }
    CHECK(ks < 0.002);
  }
  CHECK_THROWS_AS(eiv_difference_cdf(5.0, 5.0, 0.0, 1.0), DomainError);
}

TEST_CASE("EIV contour") {
  const EivModel m{5.0, 5.0, 1.40, 0.50};
  const double limit = 2.0 * std::exp(-2.5);
  CHECK(std::abs(eiv_tail_limit(m) - limit) < 1e-12);
  CHECK(std::abs(eiv_contour_value(m, 1e9) - limit) < 1e-6);
  CHECK(std::abs(eiv_head_limit(m) - (1.0 - std::abs(2.0 * std::exp(-7.0) - 1.0))) < 1e-12);

  // The median crossing G_phi(y1 - phi y2) = 1/2 has contour value 1.
  const double phi_star = oracle::bisect(
      [&](double phi) { return eiv_difference_cdf(5.0, 5.0, phi, m.y1 - phi * m.y2) - 0.5; }, 0.01, 100.0);
  CHECK(eiv_contour_value(m, phi_star) == doctest::Approx(1.0).epsilon(1e-9));
  const auto post = eiv_posterior_contour(m);
  CHECK(posterior_possibility(post, IntervalUnion{Interval{0.0, kInf, true, false}}) ==
        doctest::Approx(1.0).epsilon(1e-9));

  // Depends on the data only through y1 - phi y2.
  const EivModel shifted{5.0, 5.0, 2.5, 1.0};
  const EivModel base{5.0, 5.0, 1.5, 0.5};
  CHECK(eiv_contour_value(shifted, 2.0) == eiv_contour_value(base, 2.0));
  CHECK_THROWS_AS(EivModel({0.0, 5.0, 1.0, 1.0}).validate(), ArgumentError);
}

TEST_CASE("EIV simulation") {
  RandomStream rng(12);
  double s1 = 0.0, s2 = 0.0;
  const int reps = 200000;
  for (int i = 0; i < reps; ++i) {
    const auto y = simulate_eiv(5.0, 5.0, 10.0, 0.1, rng);
    s1 += y[0];
    s2 += y[1];
  }
  CHECK(std::abs(s1 / reps - 1.2) < 0.003);
  CHECK(std::abs(s2 / reps - 0.3) < 0.003);
}
