// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#include "nsmc/analysis.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace nsmc {

LogReal unit_sphere_area(int n) {
  if (n < 1) throw std::domain_error("unit_sphere_area: n must be >= 1");
  const double lg = std::log(static_cast<double>(n)) + 0.5 * n * std::log(std::numbers::pi) -
                    std::lgamma(0.5 * n + 1.0);
  return LogReal::from_log(lg);
}

LogReal unit_sphere_volume(int n) {
  if (n < 1) throw std::domain_error("unit_sphere_volume: n must be >= 1");
  const double lg = 0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0);
  return LogReal::from_log(lg);
}

double moment_ratio(const ExtentDensity& density, int k) {
  if (k < 1) throw std::domain_error("moment_ratio: k must be >= 1");
  using F = ExtentDensity::Family;
  switch (density.family()) {
    case F::delta:
      return 0.0;
    case F::uniform:
      if (density.param(0) == 0.0 && density.param(1) == 1.0) {
        return k / std::sqrt(2.0 * k + 1.0);
      }
      break;
    case F::polynomial: {
      const double m = density.param(0);
      return k / std::sqrt((m + 1.0) * (m + 2.0 * k + 1.0));
    }
    case F::u_quadratic: {
      const double kk = k;
      const double num = (2.0 * kk * kk + kk + 1.0) * (kk + 1.0) * (kk + 2.0) * (kk + 2.0) *
                         (kk + 3.0) * (kk + 3.0);
      const double den = 3.0 * (2.0 * kk + 1.0) * (2.0 * kk + 3.0) * (kk * kk + kk + 2.0) *
                         (kk * kk + kk + 2.0);
      return std::sqrt(num / den - 1.0);
    }
    default:
      break;
  }
  // Var(X^k)/E[X^k]^2 = E[X^2k]/E[X^k]^2 - 1 via the exact moments.
  const double d = density.moment_log(2 * k).log_abs() - 2.0 * density.moment_log(k).log_abs();
  return std::sqrt(std::fmax(0.0, std::expm1(d)));
}

DensityBounds::DensityBounds(double lambda_, double f_min_, double f_max_)
    : lambda(lambda_), f_min(f_min_), f_max(f_max_) {
  if (!(lambda > 1.0)) throw std::domain_error("DensityBounds: lambda must be > 1");
  if (!(f_min > 0.0) || !(f_max >= f_min) || !std::isfinite(f_max)) {
    throw std::domain_error("DensityBounds: requires 0 < f_min <= f_max < inf");
  }
}

std::optional<DensityBounds> density_bounds(const ExtentDensity& density) {
  using F = ExtentDensity::Family;
  switch (density.family()) {
    case F::uniform: {
      const double a = density.param(0), b = density.param(1);
      // Rescaled to [a/b, 1], the density is constant b/(b-a).
      const double f = b / (b - a);
      const double lambda = a > 0.0 ? b / a : std::numeric_limits<double>::infinity();
      return DensityBounds(lambda, f, f);
    }
    case F::polynomial:
      if (density.param(0) == 0.0) {
        return DensityBounds(std::numeric_limits<double>::infinity(), 1.0, 1.0);
      }
      return std::nullopt;  // vanishes at an endpoint
    default:
      // delta has no density; beta/arcsine/u-quadratic vanish or diverge
      // somewhere on their support, outside the envelope hypothesis.
      return std::nullopt;
  }
}

MomentBounds moment_bounds(const DensityBounds& bounds, int k) {
  if (k < 1) throw std::domain_error("moment_bounds: k must be >= 1");
  const double span = 1.0 - std::pow(bounds.lambda, -(k + 1.0));
  return {bounds.f_min / (k + 1.0) * span, bounds.f_max / (k + 1.0) * span};
}

SampleCountBound sample_count_bound(const DensityBounds& bounds, int n, double tol) {
  if (n < 1) throw std::domain_error("sample_count_bound: n must be >= 1");
  if (!(tol > 0.0)) throw std::domain_error("sample_count_bound: tol must be > 0");
  const double bound = bounds.f_max / (bounds.f_min * bounds.f_min) * n / (tol * tol);
  // "n >> 1/(lambda-1)"; one order of magnitude as the working margin.
  const bool ok = std::isinf(bounds.lambda) || n * (bounds.lambda - 1.0) >= 10.0;
  return {bound, ok};
}

double predicted_relative_error(const ExtentDensity& density, int n, std::uint64_t samples) {
  if (samples == 0) throw std::domain_error("predicted_relative_error: N must be >= 1");
  return moment_ratio(density, n) / std::sqrt(static_cast<double>(samples));
}

double numeric_moment(const ExtentDensity& density, int k) {
  if (k < 0) throw std::domain_error("numeric_moment: k must be >= 0");
  using F = ExtentDensity::Family;
  if (density.family() == F::delta) {
    return std::pow(density.param(0), k);
  }
  boost::math::quadrature::tanh_sinh<double> integrator;
  if (density.family() == F::beta || density.family() == F::arcsine) {
    // x = sin^2(theta) regularizes the integrable endpoint singularities
    // (the arcsine pdf diverges at both ends of [0,1]):
    //   E[X^k] = 2/B(a,b) int_0^{pi/2} sin(t)^{2k+2a-1} cos(t)^{2b-1} dt
    const double a = density.param(0);
    const double b = density.param(1);
    const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    auto f = [&](double t) {
      const double st = std::sin(t);
      const double ct = std::cos(t);
      return 2.0 *
             std::exp((2.0 * k + 2.0 * a - 1.0) * std::log(st) +
                      (2.0 * b - 1.0) * std::log(ct) - log_beta);
    };
    return integrator.integrate(f, 0.0, 0.5 * std::numbers::pi, 1e-12);
  }
  auto f = [&](double x) { return std::pow(x, k) * density.pdf(x); };
  return integrator.integrate(f, density.support_lo(), density.support_hi(), 1e-12);
}

}  // namespace nsmc
