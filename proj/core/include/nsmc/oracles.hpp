// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "nsmc/density.hpp"
#include "nsmc/log_real.hpp"

namespace nsmc {

/// Closed-form reference value with a stable log form and an identifier of
/// the formula used, so benchmark records stay auditable.
struct OracleValue {
  double value;       // linear; saturates to 0/inf when unrepresentable
  double log_value;   // log of |value|
  int sign;           // sign of the value (formulas here are positive unless noted)
  std::string formula_tag;

  LogReal log_real() const { return LogReal::from_log(log_value, sign); }

  static OracleValue from(LogReal v, std::string tag);
};

/// Volume of a body whose extents are uniform on [a, b]:
/// v_n/(n+1) sum_{k=0}^{n} a^k b^{n-k}, evaluated in log form.
OracleValue volume_uniform_extents(int n, double a, double b);

/// Volume of a body with beta(alpha, beta) extents:
/// v_n prod_{i=0}^{n-1} (alpha+i)/(alpha+beta+i).
OracleValue volume_beta_extents(int n, double alpha, double beta);

/// edge^n.
OracleValue volume_cube(int n, double edge);

/// v_n prod_i a_i.
OracleValue volume_ellipsoid(const std::vector<double>& semi_axes);

/// v_n (r_out^n - r_in^n).
OracleValue volume_shell(int n, double r_in, double r_out);

/// Volume oracle for any supported extent density: v_n E[R^n].
OracleValue volume_density(int n, const ExtentDensity& density);

/// Radial Gaussian exp(-r^2/2):
///   partial integral along one direction with extent S:
///     2^{n/2-1} gamma(n/2, S^2/2)
///   full integral over a domain with extents uniform on (0, r0):
///     2^{(n-1)/2} s_n / r0 [ r0/sqrt(2) gamma(n/2, r0^2/2)
///                            - gamma((n+1)/2, r0^2/2) ]
double partial_gaussian(int n, double S);
OracleValue integral_gaussian(int n, double r0);

/// Radial polynomial h(r) = sum_k a_k r^k:
///   partial: sum_k a_k/(n+k) S^{n+k}
///   full over uniform(0, r0) extents: s_n r0^n sum_k a_k r0^k/((n+k)(n+k+1))
double partial_polynomial(int n, double S, const std::vector<double>& coeffs);
OracleValue integral_polynomial(int n, double r0, const std::vector<double>& coeffs);

/// |x . e_1| integrand over uniform(0, r0) extents:
///   I = s_{n+3} / (2 pi^2 (n+2)) r0^{n+1}
OracleValue integral_xcoord(int n, double r0);

/// The cubic (r - 1/4)(r - 1/2)(r - 3/4) used in the oscillatory-integrand
/// benchmarks, lowest degree first.
const std::vector<double>& oscillatory_cubic_coeffs();

}  // namespace nsmc
