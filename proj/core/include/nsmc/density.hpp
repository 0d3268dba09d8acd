// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "nsmc/log_real.hpp"
#include "nsmc/random.hpp"

namespace nsmc {

/// Parametric extent density f_R: the distribution of extents seen when
/// directions are drawn uniformly on S^{n-1}. Each family doubles as a
/// synthetic body (sample one extent per queried direction) and as a
/// theory object with exact moments.
class ExtentDensity {
 public:
  enum class Family { delta, uniform, beta, arcsine, polynomial, u_quadratic };

  static ExtentDensity delta(double r0);
  static ExtentDensity uniform(double a, double b);
  static ExtentDensity beta(double alpha, double beta);
  static ExtentDensity arcsine();  // beta(1/2, 1/2)
  static ExtentDensity polynomial(double m);  // (m+1) x^m on [0,1], m > -1
  static ExtentDensity u_quadratic();         // 12 (x - 1/2)^2 on [0,1]

  Family family() const { return family_; }
  double param(int i) const { return i == 0 ? p0_ : p1_; }
  double support_lo() const;
  double support_hi() const;

  double pdf(double x) const;

  /// One iid draw R ~ f_R.
  double sample(RandomStream& rng) const;

  /// k-th raw moment E[R^k], exact closed form (k >= 0).
  double moment(int k) const { return moment_log(k).linear(); }
  LogReal moment_log(int k) const;

  /// Short identifier, e.g. "uniform:0,1".
  std::string tag() const;

 private:
  ExtentDensity(Family f, double p0, double p1) : family_(f), p0_(p0), p1_(p1) {}

  Family family_;
  double p0_ = 0.0;
  double p1_ = 0.0;
};

/// One extent draw from a density-synthetic body (each sampled direction
/// is queried exactly once, so iid draws match the target extent density).
double density_body_extent(const ExtentDensity& density, RandomStream& rng);

}  // namespace nsmc
