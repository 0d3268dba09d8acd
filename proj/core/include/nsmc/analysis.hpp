// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "nsmc/density.hpp"
#include "nsmc/log_real.hpp"

namespace nsmc {

/// Surface area s_n of the n-dimensional unit sphere, n pi^{n/2} / Gamma(n/2+1),
/// evaluated through log-gamma so n up to the thousands stays representable
/// in log form.
LogReal unit_sphere_area(int n);

/// Volume v_n = s_n / n of the n-dimensional unit sphere.
LogReal unit_sphere_volume(int n);

/// sqrt(Var(X^k)) / E[X^k] for an extent density.
///
/// Closed forms: uniform(0,1) gives k/sqrt(2k+1); polynomial(m) gives
/// k/sqrt((m+1)(m+2k+1)); the u-quadratic density has a full radical with
/// large-k limit sqrt(k/6). Everything else goes through the exact moment
/// formulas of the family.
double moment_ratio(const ExtentDensity& density, int k);

/// Extent-density envelope after rescaling the body so extents span
/// [1/lambda, 1]. lambda = +inf is allowed and means support down to 0.
struct DensityBounds {
  double lambda;  // largest-to-smallest extent ratio, > 1
  double f_min;   // > 0
  double f_max;   // >= f_min

  DensityBounds(double lambda_, double f_min_, double f_max_);
};

/// Envelope of a density on its own (rescaled) support, when one exists.
/// Densities that vanish or diverge somewhere on their support (beta,
/// arcsine, u-quadratic, ...) have no valid envelope and yield nullopt.
std::optional<DensityBounds> density_bounds(const ExtentDensity& density);

/// Two-sided bound on E[X^k]:
///   f/(k+1) (1 - lambda^-(k+1)) for f = f_min (lower) and f_max (upper).
struct MomentBounds {
  double lower;
  double upper;
};
MomentBounds moment_bounds(const DensityBounds& bounds, int k);

/// Sample-count bound N <= (f_max/f_min^2) n / tol^2 for relative RMS
/// error tol, with a flag for the asymptotic regime n >> 1/(lambda-1)
/// under which the bound's derivation holds.
struct SampleCountBound {
  double bound;
  bool asymptotic_regime;
};
SampleCountBound sample_count_bound(const DensityBounds& bounds, int n, double tol);

/// Predicted relative RMS error of the volume estimate:
/// moment_ratio(density, n) / sqrt(N).
double predicted_relative_error(const ExtentDensity& density, int n, std::uint64_t samples);

/// k-th raw moment by adaptive quadrature on the density's support
/// (tanh-sinh; absorbs the integrable endpoint singularities of the
/// arcsine family). Intended as an independent check of the closed forms.
double numeric_moment(const ExtentDensity& density, int k);

}  // namespace nsmc
