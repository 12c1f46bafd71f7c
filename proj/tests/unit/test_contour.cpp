#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "possim/contour.hpp"
#include "possim/dominance.hpp"
#include "possim/error.hpp"
#include "possim/random.hpp"

using namespace possim;

namespace {

AuxiliaryDistribution standard_normal_2d() {
  AuxiliaryDistribution d;
  d.name = "normal2";
  d.support = ProductSpace{{Interval::real_line(), Interval::real_line()}};
  d.density = [](std::span<const double> u) { return std::exp(-0.5 * (u[0] * u[0] + u[1] * u[1])); };
  d.sampler = [](RandomStream& rng, std::span<double> out) {
    out[0] = rng.normal();
    out[1] = rng.normal();
  };
  d.mode = Point{0.0, 0.0};
  return d;
}

}  // namespace

TEST_CASE("triangular contour") {
  const auto tri = build_triangular();
  CHECK(tri(0.5) == 1.0);
  CHECK(tri(0.0) == 0.0);
  CHECK(tri(1.0) == 0.0);
  CHECK(tri(0.25) == 0.5);
  CHECK(tri.shape() == ContourShape::unimodal);
  CHECK(tri.mode_1d().value() == 0.5);
}

TEST_CASE("maximum-specificity contour of the standard normal") {
  const auto dist = normal_distribution();
  const double expected = 2.0 * (1.0 - oracle::normal_cdf(1.96));
  for (auto method : {BuildMethod::closed_form, BuildMethod::quadrature}) {
    const auto pi = build_max_specificity(dist, method);
    CHECK(pi(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(pi(1.96) - 0.05) < 1e-4);
    CHECK(std::abs(pi(1.96) - expected) < 1e-8);
    CHECK(std::abs(pi(-0.7) - 2.0 * (1.0 - oracle::normal_cdf(0.7))) < 1e-8);
  }
}

TEST_CASE("maximum-specificity contour of the standard Cauchy") {
  const auto dist = cauchy_distribution();
  for (auto method : {BuildMethod::closed_form, BuildMethod::quadrature}) {
    const auto pi = build_max_specificity(dist, method);
    CHECK(std::abs(pi(1.0) - 0.5) < 1e-9);
    CHECK(std::abs(pi(10.0) - 2.0 * (1.0 - oracle::cauchy_cdf(10.0))) < 1e-8);
  }
}

TEST_CASE("quadrature handles a density peaked at a support boundary") {
  // f(w) < f(u) iff w > u for Exp(1), so pi(u) = exp(-u).
  const auto pi = build_max_specificity(exponential_distribution(), BuildMethod::quadrature);
  for (double u : {0.0, 0.3, 1.0, 4.0}) CHECK(std::abs(pi(u) - std::exp(-u)) < 1e-8);
}

TEST_CASE("closed form and Monte Carlo agree within 3 standard errors on a 101-point grid") {
  const std::size_t budget = 100000;
  for (const auto& dist : {normal_distribution(), cauchy_distribution()}) {
    const auto exact = build_max_specificity(dist, BuildMethod::closed_form);
    const auto mc = build_max_specificity(dist, BuildMethod::monte_carlo, budget, 7);
    REQUIRE(mc.monte_carlo().has_value());
    for (int k = 0; k <= 100; ++k) {
      const double u = -5.0 + 0.1 * k;
      const double p = exact(u);
      CHECK(std::abs(mc(u) - p) <= oracle::mc_band(p, budget));
    }
  }
}

TEST_CASE("Monte Carlo construction works in two dimensions") {
  // For the bivariate standard normal, P{f(U) < f(u)} = P{|U|^2 > |u|^2} = exp(-|u|^2 / 2).
  const std::size_t budget = 100000;
  const auto pi = build_max_specificity(standard_normal_2d(), BuildMethod::monte_carlo, budget, 3);
  for (double r : {0.0, 0.5, 1.0, 2.0}) {
    const double u[2] = {r / std::sqrt(2.0), -r / std::sqrt(2.0)};
    const double p = std::exp(-0.5 * r * r);
    CHECK(std::abs(pi(u) - p) <= oracle::mc_band(p, budget));
  }
}

TEST_CASE("flat densities are rejected with guidance") {
  CHECK_THROWS_AS(build_max_specificity(uniform_distribution(), BuildMethod::quadrature), ArgumentError);
  CHECK_THROWS_WITH_AS(build_max_specificity(uniform_distribution(), BuildMethod::closed_form),
                       doctest::Contains("build_triangular"), ArgumentError);
}

TEST_CASE("Monte Carlo without a sampler is a configuration error") {
  auto dist = normal_distribution();
  dist.sampler = nullptr;
  CHECK_THROWS_AS(build_max_specificity(dist, BuildMethod::monte_carlo), ConfigurationError);
}

TEST_CASE("ranked contours") {
  const std::size_t budget = 100000;

  SUBCASE("constant ranking flags the normalization violation") {
    const auto pi = build_ranked(normal_distribution(), [](std::span<const double>) { return 1.0; }, budget);
    CHECK(pi(0.0) == 0.0);
    CHECK(pi(3.0) == 0.0);
    REQUIRE(pi.monte_carlo().has_value());
    CHECK(pi.monte_carlo()->normalization_violated);
  }
  SUBCASE("ranking by the density matches the closed form within 2 standard errors") {
    // Each grid point is within 2 SE with probability 0.95, so require that
    // for at least 90% of a 101-point grid and 4 SE everywhere.
    const auto dist = normal_distribution();
    const auto pi = build_ranked(dist, dist.density, budget, 11);
    const auto exact = build_max_specificity(dist, BuildMethod::closed_form);
    int within = 0;
    for (int k = 0; k <= 100; ++k) {
      const double u = -4.0 + 0.08 * k;
      const double p = exact(u);
      const double se = pi.standard_error(u);
      if (p > 1e-3 && p < 1.0 - 1e-3) CHECK(se > 0.0);
      CHECK(std::abs(pi(u) - p) <= 4.0 / 3.0 * oracle::mc_band(p, budget));
      within += std::abs(pi(u) - p) <= 2.0 * std::max(se, 1.0 / budget);
    }
    CHECK(within >= 91);
    CHECK_FALSE(pi.monte_carlo()->normalization_violated);
  }
  SUBCASE("identity ranking on Unif(0,1) gives the CDF") {
    const auto pi = build_ranked(uniform_distribution(), [](std::span<const double> u) { return u[0]; }, budget, 5);
    CHECK(std::abs(pi(0.3) - 0.3) <= oracle::mc_band(0.3, budget));
  }
  SUBCASE("non-finite rankings are numeric errors") {
    const auto bad = [](std::span<const double> u) { return u[0] > 0 ? std::log(u[0]) : std::nan(""); };
    CHECK_THROWS_AS(build_ranked(normal_distribution(), bad, 1000), NumericError);
  }
}

TEST_CASE("built contours stay in [0,1], peak at the mode and are unimodal on a grid") {
  for (const auto& dist : {normal_distribution(), cauchy_distribution(), normal_distribution(2.0, 0.5)}) {
    const auto pi = build_max_specificity(dist, BuildMethod::quadrature);
    REQUIRE(pi.mode_1d().has_value());
    const double m = *pi.mode_1d();
    CHECK(pi(m) == doctest::Approx(1.0).epsilon(1e-9));
    double prev = 0.0;
    for (int k = 0; k <= 400; ++k) {
      const double u = m - 10.0 + 0.05 * k;
      const double v = pi(u);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      if (k <= 200) CHECK(v >= prev - 1e-12);
      else CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("contour values at auxiliary draws dominate Unif(0,1)") {
  const std::size_t n = 20000;
  const double tol = 3.0 * dkw_band(n, 0.01);
  for (const auto& dist : {normal_distribution(), cauchy_distribution(), exponential_distribution()}) {
    const auto pi = build_max_specificity(dist, BuildMethod::quadrature);
    RandomStream rng(42);
    std::vector<double> values(n);
    for (auto& v : values) v = pi(dist.sample_1d(rng));
    CHECK(dominance_check(values, tol).pass);
  }

  SUBCASE("triangular contour at uniform draws is exactly uniform") {
    const auto tri = build_triangular();
    RandomStream rng(9);
    std::vector<double> values(n);
    for (auto& v : values) v = tri(rng.uniform());
    CHECK(dominance_check(values, tol).pass);
    CHECK(ks_distance_uniform(values) <= tol);
  }
}

TEST_CASE("tabulated contours interpolate linearly") {
  const TabulatedContour tab({0.0, 1.0, 2.0}, {0.0, 1.0, 0.5});
  CHECK(tab(0.5) == doctest::Approx(0.5));
  CHECK(tab(1.5) == doctest::Approx(0.75));
  const TabulatedContour tri(build_triangular(), 0.0, 1.0, 101);
  CHECK(tri(0.25) == doctest::Approx(0.5));
}
