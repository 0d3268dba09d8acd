// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nsmc/analysis.hpp"
#include "test_util.hpp"

using namespace nsmc;
namespace pi = std::numbers;

TEST_CASE("unit sphere area") {
  CHECK(unit_sphere_area(2).linear() == doctest::Approx(2.0 * pi::pi).epsilon(1e-14));
  CHECK(unit_sphere_area(3).linear() == doctest::Approx(4.0 * pi::pi).epsilon(1e-14));
  // Gamma(7/2) = 15 sqrt(pi) / 8, so s_5 = 8 pi^2 / 3.
  CHECK(unit_sphere_area(5).linear() ==
        doctest::Approx(8.0 * pi::pi * pi::pi / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(unit_sphere_area(0), std::domain_error);
}

TEST_CASE("unit sphere volume") {
  CHECK(unit_sphere_volume(1).linear() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(unit_sphere_volume(2).linear() == doctest::Approx(pi::pi).epsilon(1e-14));
  CHECK_THROWS_AS(unit_sphere_volume(0), std::domain_error);

  SUBCASE("log form at n=500 matches the log-gamma identity") {
    const double expected = 250.0 * std::log(pi::pi) - std::lgamma(251.0);
    CHECK(std::fabs(unit_sphere_volume(500).log_abs() - expected) <= 1e-12);
  }
  SUBCASE("v_n = s_n / n in log form for n up to 1000") {
    for (int n = 1; n <= 1000; ++n) {
      const double diff = unit_sphere_area(n).log_abs() - unit_sphere_volume(n).log_abs();
      CHECK(std::fabs(diff - std::log(static_cast<double>(n))) <= 1e-12);
    }
  }
}

TEST_CASE("moment_ratio closed forms") {
  SUBCASE("uniform(0,1): k / sqrt(2k+1)") {
    CHECK(moment_ratio(ExtentDensity::uniform(0, 1), 1) ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(moment_ratio(ExtentDensity::uniform(0, 1), 10) ==
          doctest::Approx(10.0 / std::sqrt(21.0)).epsilon(1e-14));
  }
  SUBCASE("polynomial with m=0 equals uniform(0,1)") {
    for (int k : {1, 2, 5, 17, 60}) {
      CHECK(moment_ratio(ExtentDensity::polynomial(0.0), k) ==
            doctest::Approx(moment_ratio(ExtentDensity::uniform(0, 1), k)).epsilon(1e-13));
    }
  }
  SUBCASE("u-quadratic at large k approaches sqrt(k/6)") {
    const double r = moment_ratio(ExtentDensity::u_quadratic(), 60);
    CHECK(std::fabs(r / std::sqrt(10.0) - 1.0) <= 0.05);
  }
  SUBCASE("delta has zero ratio") {
    CHECK(moment_ratio(ExtentDensity::delta(0.3), 7) == 0.0);
  }
  SUBCASE("closed forms are consistent with the moment route") {
    for (int k : {1, 3, 9, 25}) {
      const auto u = ExtentDensity::uniform(0, 1);
      const double via_moments =
          std::sqrt(u.moment(2 * k) / (u.moment(k) * u.moment(k)) - 1.0);
      CHECK(moment_ratio(u, k) == doctest::Approx(via_moments).epsilon(1e-10));
      const auto q = ExtentDensity::u_quadratic();
      const double via_q = std::sqrt(q.moment(2 * k) / (q.moment(k) * q.moment(k)) - 1.0);
      CHECK(moment_ratio(q, k) == doctest::Approx(via_q).epsilon(1e-9));
    }
  }
}

TEST_CASE("variance identity: ratio^2 + 1 = E[X^2k]/E[X^k]^2 with E[X^k] = 1/(k+1)") {
  const auto u = ExtentDensity::uniform(0, 1);
  for (int k : {1, 2, 4, 8, 16}) {
    const double lhs = moment_ratio(u, k) * moment_ratio(u, k) + 1.0;
    const double ek = 1.0 / (k + 1.0);
    const double e2k = 1.0 / (2.0 * k + 1.0);
    CHECK(lhs == doctest::Approx(e2k / (ek * ek)).epsilon(1e-12));
  }
}

TEST_CASE("closed-form moments match independent quadrature up to k = 40") {
  const ExtentDensity densities[] = {
      ExtentDensity::uniform(0.0, 1.0), ExtentDensity::uniform(0.25, 0.9),
      ExtentDensity::beta(2.0, 2.0),    ExtentDensity::polynomial(3.0),
      ExtentDensity::u_quadratic(),
  };
  for (const auto& d : densities) {
    for (int k : {1, 2, 3, 5, 10, 20, 40}) {
      const double numeric = testutil::integrate(
          [&](double x) { return std::pow(x, k) * d.pdf(x); }, d.support_lo(), d.support_hi(),
          1e-14);
      CHECK(std::fabs(d.moment(k) - numeric) <= 1e-10 * std::max(1.0, std::fabs(numeric)));
    }
  }
  SUBCASE("arcsine moments via the smooth substitution x = sin^2(pi u / 2)") {
    const auto arc = ExtentDensity::arcsine();
    for (int k : {1, 2, 3, 8, 20, 40}) {
      const double numeric = testutil::integrate(
          [&](double u) { return std::pow(std::sin(0.5 * pi::pi * u), 2 * k); }, 0.0, 1.0, 1e-14);
      CHECK(std::fabs(arc.moment(k) - numeric) <= 1e-10);
    }
  }
}

TEST_CASE("library numeric_moment agrees with the closed forms") {
  const ExtentDensity densities[] = {
      ExtentDensity::uniform(0.0, 1.0),
      ExtentDensity::beta(2.0, 2.0),
      ExtentDensity::arcsine(),  // unbounded endpoints
      ExtentDensity::u_quadratic(),
  };
  for (const auto& d : densities) {
    for (int k : {1, 2, 7, 19, 40}) {
      CHECK(numeric_moment(d, k) == doctest::Approx(d.moment(k)).epsilon(1e-10));
    }
  }
}

TEST_CASE("every density integrates to one") {
  const ExtentDensity densities[] = {
      ExtentDensity::uniform(0.0, 1.0), ExtentDensity::uniform(0.3, 2.0),
      ExtentDensity::beta(2.0, 2.0),    ExtentDensity::arcsine(),
      ExtentDensity::polynomial(3.0),   ExtentDensity::u_quadratic(),
  };
  for (const auto& d : densities) {
    CHECK(numeric_moment(d, 0) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("arcsine delegates to beta(1/2, 1/2)") {
  const auto arc = ExtentDensity::arcsine();
  const auto b = ExtentDensity::beta(0.5, 0.5);
  for (int k = 1; k <= 30; ++k) CHECK(arc.moment(k) == b.moment(k));
}

TEST_CASE("moment_bounds") {
  SUBCASE("constant density on [1/2, 1] makes the bounds coincide with E[X]") {
    const DensityBounds bounds(2.0, 2.0, 2.0);
    const auto mb = moment_bounds(bounds, 1);
    CHECK(mb.lower == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(mb.upper == doctest::Approx(0.75).epsilon(1e-14));
  }
  SUBCASE("direct substitution") {
    const DensityBounds bounds(2.0, 1.0, 3.0);
    const auto mb = moment_bounds(bounds, 2);
    CHECK(mb.lower == doctest::Approx((1.0 / 3.0) * (1.0 - 1.0 / 8.0)).epsilon(1e-14));
    CHECK(mb.upper == doctest::Approx(0.875).epsilon(1e-14));
  }
  SUBCASE("bounded densities have their moments inside the bounds") {
    // f(x) = c (1 + x) on [1/2, 1], a density with explicit envelope.
    const double c = 1.0 / testutil::integrate([](double x) { return 1.0 + x; }, 0.5, 1.0);
    const DensityBounds bounds(2.0, c * 1.5, c * 2.0);
    for (int k = 1; k <= 50; ++k) {
      const double mk = testutil::integrate(
          [&](double x) { return std::pow(x, k) * c * (1.0 + x); }, 0.5, 1.0, 1e-15);
      const auto mb = moment_bounds(bounds, k);
      CHECK(mk >= mb.lower - 1e-12);
      CHECK(mk <= mb.upper + 1e-12);
    }
  }
  SUBCASE("lambda <= 1 is a domain error") {
    CHECK_THROWS_AS(DensityBounds(1.0, 1.0, 1.0), std::domain_error);
  }
}

TEST_CASE("sample_count_bound") {
  const DensityBounds unit(std::numeric_limits<double>::infinity(), 1.0, 1.0);
  SUBCASE("f = 1, n = 10, tol = 0.1 gives 1000") {
    CHECK(sample_count_bound(unit, 10, 0.1).bound == doctest::Approx(1000.0).epsilon(1e-12));
  }
  SUBCASE("doubling n doubles the bound") {
    CHECK(sample_count_bound(unit, 20, 0.1).bound ==
          doctest::Approx(2.0 * sample_count_bound(unit, 10, 0.1).bound).epsilon(1e-12));
  }
  SUBCASE("regime flag reflects n >> 1/(lambda-1)") {
    const DensityBounds narrow(1.01, 1.0, 1.0);  // needs n >> 100
    CHECK_FALSE(sample_count_bound(narrow, 10, 0.1).asymptotic_regime);
    CHECK(sample_count_bound(narrow, 5000, 0.1).asymptotic_regime);
    CHECK(sample_count_bound(unit, 1, 0.1).asymptotic_regime);
  }
}

TEST_CASE("density envelopes") {
  CHECK(density_bounds(ExtentDensity::uniform(0, 1)).has_value());
  CHECK(density_bounds(ExtentDensity::uniform(0.5, 1.0))->lambda == doctest::Approx(2.0));
  CHECK_FALSE(density_bounds(ExtentDensity::arcsine()).has_value());
  CHECK_FALSE(density_bounds(ExtentDensity::beta(2, 2)).has_value());
  CHECK_FALSE(density_bounds(ExtentDensity::u_quadratic()).has_value());
}

TEST_CASE("predicted_relative_error") {
  const auto u = ExtentDensity::uniform(0, 1);
  SUBCASE("uniform(0,1), n=10, N=1e4") {
    CHECK(predicted_relative_error(u, 10, 10000) ==
          doctest::Approx(10.0 / std::sqrt(21.0) / 100.0).epsilon(1e-12));
    CHECK(predicted_relative_error(u, 10, 10000) == doctest::Approx(0.02182).epsilon(1e-3));
  }
  SUBCASE("quadrupling N halves the prediction") {
    CHECK(predicted_relative_error(u, 7, 40000) ==
          doctest::Approx(0.5 * predicted_relative_error(u, 7, 10000)).epsilon(1e-12));
  }
  SUBCASE("delta density predicts zero error") {
    CHECK(predicted_relative_error(ExtentDensity::delta(2.0), 30, 1) == 0.0);
  }
}
