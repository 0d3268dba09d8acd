// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#include "nsmc/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nsmc/analysis.hpp"
#include "nsmc/special_functions.hpp"

namespace nsmc {

OracleValue OracleValue::from(LogReal v, std::string tag) {
  return {v.linear(), v.log_abs(), v.sign(), std::move(tag)};
}

OracleValue volume_uniform_extents(int n, double a, double b) {
  if (!(0.0 <= a && a <= b) || !(b > 0.0)) {
    throw std::domain_error("volume_uniform_extents: requires 0 <= a <= b, b > 0");
  }
  const LogReal vn = unit_sphere_volume(n);
  LogReal mean_rn;
  if (a == b) {
    // Sphere limit: the geometric sum collapses to (n+1) equal terms.
    mean_rn = LogReal::from_log(n * std::log(b));
  } else {
    // sum_{k=0}^n a^k b^{n-k} = (b^{n+1} - a^{n+1}) / (b - a)
    const double lb = std::log(b);
    double log_num;
    if (a == 0.0) {
      log_num = (n + 1.0) * lb;
    } else {
      log_num = (n + 1.0) * lb + std::log1p(-std::exp((n + 1.0) * (std::log(a) - lb)));
    }
    mean_rn = LogReal::from_log(log_num - std::log(b - a) - std::log(n + 1.0));
  }
  return OracleValue::from(vn * mean_rn, "uniform-extent-volume");
}

OracleValue volume_beta_extents(int n, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::domain_error("volume_beta_extents: requires alpha, beta > 0");
  }
  if (n < 1) throw std::domain_error("volume_beta_extents: n must be >= 1");
  double lg = 0.0;
  for (int i = 0; i < n; ++i) lg += std::log((alpha + i) / (alpha + beta + i));
  return OracleValue::from(unit_sphere_volume(n) * LogReal::from_log(lg), "beta-extent-volume");
}

OracleValue volume_cube(int n, double edge) {
  if (!(edge > 0.0)) throw std::domain_error("volume_cube: edge must be > 0");
  if (n < 1) throw std::domain_error("volume_cube: n must be >= 1");
  return OracleValue::from(LogReal::from_log(n * std::log(edge)), "cube-volume");
}

OracleValue volume_ellipsoid(const std::vector<double>& semi_axes) {
  if (semi_axes.empty()) throw std::domain_error("volume_ellipsoid: n must be >= 1");
  double lg = 0.0;
  for (double a : semi_axes) {
    if (!(a > 0.0)) throw std::domain_error("volume_ellipsoid: semi-axes must be > 0");
    lg += std::log(a);
  }
  const int n = static_cast<int>(semi_axes.size());
  return OracleValue::from(unit_sphere_volume(n) * LogReal::from_log(lg), "ellipsoid-volume");
}

OracleValue volume_shell(int n, double r_in, double r_out) {
  if (!(0.0 < r_in && r_in < r_out)) {
    throw std::domain_error("volume_shell: requires 0 < r_in < r_out");
  }
  const double lo = std::log(r_out);
  const double lg = n * lo + std::log1p(-std::exp(n * (std::log(r_in) - lo)));
  return OracleValue::from(unit_sphere_volume(n) * LogReal::from_log(lg), "shell-volume");
}

OracleValue volume_density(int n, const ExtentDensity& density) {
  using F = ExtentDensity::Family;
  switch (density.family()) {
    case F::delta: {
      const double r0 = density.param(0);
      if (r0 == 0.0) return OracleValue::from(LogReal{}, "sphere-volume");
      return OracleValue::from(
          unit_sphere_volume(n) * LogReal::from_log(n * std::log(r0)), "sphere-volume");
    }
    case F::uniform:
      return volume_uniform_extents(n, density.param(0), density.param(1));
    case F::beta:
    case F::arcsine:
      return volume_beta_extents(n, density.param(0), density.param(1));
    default:
      return OracleValue::from(unit_sphere_volume(n) * density.moment_log(n),
                               "density-moment-volume");
  }
}

double partial_gaussian(int n, double S) {
  if (n < 1) throw std::domain_error("partial_gaussian: n must be >= 1");
  if (!(S >= 0.0)) throw std::domain_error("partial_gaussian: S must be >= 0");
  if (S == 0.0) return 0.0;
  return std::exp((0.5 * n - 1.0) * std::numbers::ln2 + log_lower_gamma(0.5 * n, 0.5 * S * S));
}

OracleValue integral_gaussian(int n, double r0) {
  if (n < 1) throw std::domain_error("integral_gaussian: n must be >= 1");
  if (!(r0 > 0.0)) throw std::domain_error("integral_gaussian: r0 must be > 0");
  const double u = 0.5 * r0 * r0;
  const LogReal term1 =
      LogReal::from_log(std::log(r0) - 0.5 * std::numbers::ln2 + log_lower_gamma(0.5 * n, u));
  const LogReal term2 = LogReal::from_log(log_lower_gamma(0.5 * (n + 1.0), u));
  const LogReal front = LogReal::from_log(0.5 * (n - 1.0) * std::numbers::ln2 +
                                          unit_sphere_area(n).log_abs() - std::log(r0));
  return OracleValue::from(front * (term1 - term2), "gaussian-radial-integral");
}

double partial_polynomial(int n, double S, const std::vector<double>& coeffs) {
  if (n < 1) throw std::domain_error("partial_polynomial: n must be >= 1");
  if (!(S >= 0.0)) throw std::domain_error("partial_polynomial: S must be >= 0");
  // The terms can cancel almost completely near zeros of the partial
  // integral; extended precision keeps the result meaningful there.
  long double sum = 0.0L;
  long double sk = powl(static_cast<long double>(S), n);  // S^{n+k}
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    sum += static_cast<long double>(coeffs[k]) / (n + static_cast<long double>(k)) * sk;
    sk *= S;
  }
  return static_cast<double>(sum);
}

OracleValue integral_polynomial(int n, double r0, const std::vector<double>& coeffs) {
  if (n < 1) throw std::domain_error("integral_polynomial: n must be >= 1");
  if (!(r0 > 0.0)) throw std::domain_error("integral_polynomial: r0 must be > 0");
  LogReal sum;
  double rk = 1.0;  // r0^k
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double dk = static_cast<double>(k);
    const double c = coeffs[k] / ((n + dk) * (n + dk + 1.0)) * rk;
    sum += LogReal::from_linear(c);
    rk *= r0;
  }
  const LogReal front = unit_sphere_area(n) * LogReal::from_log(n * std::log(r0));
  return OracleValue::from(front * sum, "polynomial-radial-integral");
}

OracleValue integral_xcoord(int n, double r0) {
  if (n < 1) throw std::domain_error("integral_xcoord: n must be >= 1");
  if (!(r0 > 0.0)) throw std::domain_error("integral_xcoord: r0 must be > 0");
  const double lg = unit_sphere_area(n + 3).log_abs() -
                    std::log(2.0 * std::numbers::pi * std::numbers::pi * (n + 2.0)) +
                    (n + 1.0) * std::log(r0);
  return OracleValue::from(LogReal::from_log(lg), "xcoord-integral");
}

const std::vector<double>& oscillatory_cubic_coeffs() {
  // (r - 0.25)(r - 0.5)(r - 0.75), lowest degree first
  static const std::vector<double> coeffs = {-0.09375, 0.6875, -1.5, 1.0};
  return coeffs;
}

}  // namespace nsmc
