// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

#include "nsmc/analysis.hpp"
#include "nsmc/oracles.hpp"
#include "nsmc/special_functions.hpp"
#include "test_util.hpp"

using namespace nsmc;
namespace pi = std::numbers;

TEST_CASE("incomplete gamma") {
  SUBCASE("gamma(1, x) = 1 - exp(-x)") {
    for (double x : {0.01, 0.3, 1.0, 2.5, 10.0}) {
      CHECK(lower_gamma(1.0, x) == doctest::Approx(-std::expm1(-x)).epsilon(1e-13));
    }
  }
  SUBCASE("matches an independent implementation on both regimes") {
    for (double a : {0.5, 1.5, 4.0, 17.5, 120.0}) {
      for (double x : {0.05, 0.9, 3.7, 25.0, 240.0}) {
        const double mine = std::exp(log_gamma_p(a, x));
        const double ref = boost::math::gamma_p(a, x);
        CHECK(std::fabs(mine - ref) <= 1e-12 * std::max(ref, 1e-30));
      }
    }
  }
  SUBCASE("log form survives arguments whose linear values underflow") {
    // P(250, 0.5) is around 1e-570; only the log form is representable.
    const double lp = log_gamma_p(250.0, 0.5);
    CHECK(std::isfinite(lp));
    // leading series term: log(x^a e^-x / Gamma(a+1))
    const double leading = 250.0 * std::log(0.5) - 0.5 - std::lgamma(251.0);
    CHECK(lp == doctest::Approx(leading).epsilon(1e-3));
  }
  SUBCASE("domain errors") {
    CHECK_THROWS_AS(log_gamma_p(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma_p(1.0, -1.0), std::domain_error);
  }
}

TEST_CASE("volume_uniform_extents") {
  SUBCASE("a=0, b=1, n=2 gives pi/3") {
    CHECK(volume_uniform_extents(2, 0.0, 1.0).value ==
          doctest::Approx(pi::pi / 3.0).epsilon(1e-13));
  }
  SUBCASE("a=b recovers the sphere volume") {
    for (int n : {1, 2, 5, 20}) {
      const double vn = unit_sphere_volume(n).linear();
      CHECK(volume_uniform_extents(n, 0.7, 0.7).value ==
            doctest::Approx(vn * std::pow(0.7, n)).epsilon(1e-12));
    }
  }
  SUBCASE("a=0.5, b=1, n=3 by hand") {
    const double v3 = unit_sphere_volume(3).linear();
    CHECK(volume_uniform_extents(3, 0.5, 1.0).value ==
          doctest::Approx(1.875 * v3 / 4.0).epsilon(1e-12));
  }
  SUBCASE("matches v_n times the numeric n-th moment for n up to 100") {
    for (int n : {1, 7, 33, 100}) {
      const double expected =
          unit_sphere_volume(n).linear() *
          testutil::integrate([&](double r) { return std::pow(r, n) / 0.6; }, 0.2, 0.8, 1e-15);
      CHECK(volume_uniform_extents(n, 0.2, 0.8).value ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }
  SUBCASE("invalid ranges") {
    CHECK_THROWS_AS(volume_uniform_extents(2, 0.5, 0.2), std::domain_error);
    CHECK_THROWS_AS(volume_uniform_extents(2, -0.1, 1.0), std::domain_error);
  }
}

TEST_CASE("volume_beta_extents") {
  SUBCASE("alpha=2, beta=2, n=1 gives v_1 E[R] = 1") {
    CHECK(volume_beta_extents(1, 2.0, 2.0).value == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("arcsine at n=2 gives 0.375 pi") {
    CHECK(volume_beta_extents(2, 0.5, 0.5).value ==
          doctest::Approx(0.375 * pi::pi).epsilon(1e-13));
  }
  SUBCASE("matches quadrature moments") {
    const auto d = ExtentDensity::beta(2.5, 1.5);
    for (int n : {1, 4, 11}) {
      const double expected =
          unit_sphere_volume(n).linear() *
          testutil::integrate([&](double x) { return std::pow(x, n) * d.pdf(x); }, 0.0, 1.0,
                              1e-15);
      CHECK(volume_beta_extents(n, 2.5, 1.5).value ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(volume_beta_extents(2, 0.0, 1.0), std::domain_error);
}

TEST_CASE("volume_cube and volume_ellipsoid") {
  CHECK(volume_cube(5, 1.0).value == 1.0);
  CHECK(volume_cube(3, 2.0).value == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(volume_cube(100, 1.1).log_value == doctest::Approx(100.0 * std::log(1.1)).epsilon(1e-13));

  CHECK(volume_ellipsoid(std::vector<double>(4, 1.0)).value ==
        doctest::Approx(unit_sphere_volume(4).linear()).epsilon(1e-13));
  CHECK(volume_ellipsoid({1.0, 0.5}).value == doctest::Approx(pi::pi / 2.0).epsilon(1e-13));

  SUBCASE("log form equals the sum of logs at n=20") {
    std::vector<double> axes(20);
    double expected = unit_sphere_volume(20).log_abs();
    for (int i = 0; i < 20; ++i) {
      axes[static_cast<std::size_t>(i)] = 0.5 + 0.5 * i / 19.0;
      expected += std::log(axes[static_cast<std::size_t>(i)]);
    }
    CHECK(volume_ellipsoid(axes).log_value == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("gaussian integrand oracles") {
  SUBCASE("partial at n=2 is 1 - exp(-S^2/2)") {
    for (double S : {0.1, 0.7, 1.0, 2.0}) {
      CHECK(partial_gaussian(2, S) == doctest::Approx(-std::expm1(-0.5 * S * S)).epsilon(1e-12));
    }
  }
  SUBCASE("partial at S=0 vanishes") { CHECK(partial_gaussian(7, 0.0) == 0.0); }
  SUBCASE("partial is monotone in S and bounded by 2^{n/2-1} Gamma(n/2)") {
    for (int n : {2, 5, 12}) {
      double prev = 0.0;
      const double bound = std::exp((0.5 * n - 1.0) * pi::ln2 + std::lgamma(0.5 * n));
      for (double S = 0.25; S <= 6.0; S += 0.25) {
        const double v = partial_gaussian(n, S);
        CHECK(v >= prev);
        CHECK(v <= bound * (1.0 + 1e-12));
        prev = v;
      }
    }
  }
  SUBCASE("full integral at n=2, r0=1 matches polar numeric integration") {
    // I = s_2 E_S[ int_0^S rho e^{-rho^2/2} drho ] with S uniform on (0,1)
    const double numeric = 2.0 * pi::pi *
                           testutil::integrate(
                               [](double S) {
                                 return testutil::integrate(
                                     [](double rho) { return rho * std::exp(-0.5 * rho * rho); },
                                     0.0, S, 1e-14);
                               },
                               0.0, 1.0, 1e-12);
    CHECK(integral_gaussian(2, 1.0).value == doctest::Approx(numeric).epsilon(1e-8));
  }
  SUBCASE("full integral matches direction-averaged partials for n=3, r0=0.8") {
    const double numeric =
        unit_sphere_area(3).linear() *
        testutil::integrate([](double S) { return partial_gaussian(3, S) / 0.8; }, 0.0, 0.8,
                            1e-13);
    CHECK(integral_gaussian(3, 0.8).value == doctest::Approx(numeric).epsilon(1e-10));
  }
}

TEST_CASE("polynomial integrand oracles") {
  SUBCASE("the oscillatory cubic has the expected coefficients") {
    const auto& c = oscillatory_cubic_coeffs();
    REQUIRE(c.size() == 4);
    CHECK(c[0] == -0.09375);
    CHECK(c[1] == 0.6875);
    CHECK(c[2] == -1.5);
    CHECK(c[3] == 1.0);
    // they really are (r-1/4)(r-1/2)(r-3/4)
    for (double r : {0.1, 0.4, 0.9}) {
      const double expanded = ((c[3] * r + c[2]) * r + c[1]) * r + c[0];
      CHECK(expanded ==
            doctest::Approx((r - 0.25) * (r - 0.5) * (r - 0.75)).epsilon(1e-14));
    }
  }
  SUBCASE("constant integrand reduces to c times the uniform-extent volume") {
    for (int n : {2, 6, 15}) {
      const double c = 2.75;
      const double reduced = integral_polynomial(n, 1.0, {c}).value;
      CHECK(reduced == doctest::Approx(c * volume_uniform_extents(n, 0.0, 1.0).value)
                           .epsilon(1e-12));
    }
  }
  SUBCASE("n=2, r0=1, cubic coefficients match polar numeric integration") {
    const auto& c = oscillatory_cubic_coeffs();
    const double numeric = 2.0 * pi::pi *
                           testutil::integrate(
                               [&](double S) {
                                 return testutil::integrate(
                                     [&](double rho) {
                                       const double h =
                                           ((c[3] * rho + c[2]) * rho + c[1]) * rho + c[0];
                                       return rho * h;
                                     },
                                     0.0, S, 1e-14);
                               },
                               0.0, 1.0, 1e-12);
    CHECK(integral_polynomial(2, 1.0, c).value == doctest::Approx(numeric).epsilon(1e-8));
  }
  SUBCASE("partial matches direct quadrature of rho^{n-1} h") {
    const auto& c = oscillatory_cubic_coeffs();
    for (int n : {2, 9}) {
      for (double S : {0.3, 0.8, 1.0}) {
        const double direct = testutil::integrate(
            [&](double rho) {
              const double h = ((c[3] * rho + c[2]) * rho + c[1]) * rho + c[0];
              return std::pow(rho, n - 1) * h;
            },
            0.0, S, 1e-15);
        CHECK(partial_polynomial(n, S, c) == doctest::Approx(direct).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("x-coordinate integrand oracle") {
  SUBCASE("n=2, r0=1 gives 1/3 (s_5 = 8 pi^2/3)") {
    CHECK(integral_xcoord(2, 1.0).value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  }
  SUBCASE("value scales as r0^{n+1}") {
    for (int n : {2, 5}) {
      const double base = integral_xcoord(n, 1.0).value;
      CHECK(integral_xcoord(n, 2.0).value ==
            doctest::Approx(base * std::pow(2.0, n + 1)).epsilon(1e-12));
    }
  }
  SUBCASE("n=3, r0=1 matches a spherical-average numeric oracle") {
    // I = s_3 E[|s_1|] E[S^4]/4; for n=3, |s_1| = |cos(theta)| averaged over
    // the sphere with weight sin(theta)/2 gives 1/2.
    const double avg_abs_component = testutil::integrate(
        [](double theta) { return std::fabs(std::cos(theta)) * 0.5 * std::sin(theta); }, 0.0,
        pi::pi, 1e-14);
    const double numeric = unit_sphere_area(3).linear() * avg_abs_component * (1.0 / 5.0) / 4.0;
    CHECK(integral_xcoord(3, 1.0).value == doctest::Approx(numeric).epsilon(1e-6));
  }
}

TEST_CASE("oracle log and linear forms are consistent") {
  const OracleValue values[] = {
      volume_uniform_extents(7, 0.0, 1.0),
      volume_beta_extents(5, 2.0, 2.0),
      volume_cube(9, 1.1),
      volume_ellipsoid({1.0, 0.8, 0.6}),
      volume_shell(4, 0.5, 1.0),
      integral_gaussian(6, 1.0),
      integral_polynomial(6, 1.0, oscillatory_cubic_coeffs()),
      integral_xcoord(6, 1.0),
  };
  for (const auto& v : values) {
    CHECK(v.sign == 1);
    CHECK(std::exp(v.log_value) == doctest::Approx(v.value).epsilon(1e-12));
    CHECK(!v.formula_tag.empty());
  }
}

TEST_CASE("volume_density dispatch") {
  CHECK(volume_density(3, ExtentDensity::delta(0.7)).value ==
        doctest::Approx(unit_sphere_volume(3).linear() * std::pow(0.7, 3)).epsilon(1e-13));
  CHECK(volume_density(3, ExtentDensity::uniform(0, 1)).formula_tag == "uniform-extent-volume");
  CHECK(volume_density(3, ExtentDensity::arcsine()).formula_tag == "beta-extent-volume");
  CHECK(volume_density(3, ExtentDensity::u_quadratic()).value ==
        doctest::Approx(unit_sphere_volume(3).linear() *
                        ExtentDensity::u_quadratic().moment(3))
            .epsilon(1e-12));
}
