// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#include "nsmc/density.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace nsmc {

namespace {

// Marsaglia-Tsang gamma(alpha, 1) sampler; alpha < 1 handled by boosting.
double sample_gamma(double alpha, RandomStream& rng) {
  if (alpha < 1.0) {
    const double g = sample_gamma(alpha + 1.0, rng);
    double u;
    do {
      u = rng.uniform();
    } while (u == 0.0);
    return g * std::pow(u, 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

ExtentDensity ExtentDensity::delta(double r0) {
  if (!(r0 >= 0.0) || !std::isfinite(r0)) throw std::domain_error("delta density: r0 must be finite and >= 0");
  return {Family::delta, r0, 0.0};
}

ExtentDensity ExtentDensity::uniform(double a, double b) {
  if (!(0.0 <= a && a < b) || !std::isfinite(b)) {
    throw std::domain_error("uniform density: requires 0 <= a < b");
  }
  return {Family::uniform, a, b};
}

ExtentDensity ExtentDensity::beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::domain_error("beta density: requires alpha, beta > 0");
  return {Family::beta, alpha, beta};
}

ExtentDensity ExtentDensity::arcsine() { return {Family::arcsine, 0.5, 0.5}; }

ExtentDensity ExtentDensity::polynomial(double m) {
  // (m+1) x^m integrates to 1 on [0,1] only for m > -1.
  if (!(m > -1.0)) throw std::domain_error("polynomial density: requires m > -1");
  return {Family::polynomial, m, 0.0};
}

ExtentDensity ExtentDensity::u_quadratic() { return {Family::u_quadratic, 0.0, 0.0}; }

double ExtentDensity::support_lo() const {
  switch (family_) {
    case Family::delta: return p0_;
    case Family::uniform: return p0_;
    default: return 0.0;
  }
}

double ExtentDensity::support_hi() const {
  switch (family_) {
    case Family::delta: return p0_;
    case Family::uniform: return p1_;
    default: return 1.0;
  }
}

double ExtentDensity::pdf(double x) const {
  switch (family_) {
    case Family::delta:
      throw std::domain_error("delta density has no pointwise pdf");
    case Family::uniform:
      return (x >= p0_ && x <= p1_) ? 1.0 / (p1_ - p0_) : 0.0;
    case Family::beta:
    case Family::arcsine: {
      if (x < 0.0 || x > 1.0) return 0.0;
      const double lb = std::lgamma(p0_ + p1_) - std::lgamma(p0_) - std::lgamma(p1_);
      const double inf = std::numeric_limits<double>::infinity();
      if (x == 0.0) return p0_ < 1.0 ? inf : (p0_ == 1.0 ? std::exp(lb) : 0.0);
      if (x == 1.0) return p1_ < 1.0 ? inf : (p1_ == 1.0 ? std::exp(lb) : 0.0);
      return std::exp(lb + (p0_ - 1.0) * std::log(x) + (p1_ - 1.0) * std::log1p(-x));
    }
    case Family::polynomial:
      return (x >= 0.0 && x <= 1.0) ? (p0_ + 1.0) * std::pow(x, p0_) : 0.0;
    case Family::u_quadratic: {
      if (x < 0.0 || x > 1.0) return 0.0;
      const double d = x - 0.5;
      return 12.0 * d * d;
    }
  }
  return 0.0;
}

double ExtentDensity::sample(RandomStream& rng) const {
  switch (family_) {
    case Family::delta:
      return p0_;
    case Family::uniform:
      return rng.uniform(p0_, p1_);
    case Family::beta: {
      const double g1 = sample_gamma(p0_, rng);
      const double g2 = sample_gamma(p1_, rng);
      return g1 / (g1 + g2);
    }
    case Family::arcsine: {
      // X = sin^2(pi U / 2) has the arcsine law on [0,1].
      const double s = std::sin(0.5 * std::numbers::pi * rng.uniform());
      return s * s;
    }
    case Family::polynomial:
      // CDF x^(m+1) inverted.
      return std::pow(rng.uniform(), 1.0 / (p0_ + 1.0));
    case Family::u_quadratic: {
      // CDF 4(x - 1/2)^3 + 1/2 inverted.
      return 0.5 + std::cbrt((rng.uniform() - 0.5) / 4.0);
    }
  }
  return 0.0;
}

LogReal ExtentDensity::moment_log(int k) const {
  if (k < 0) throw std::domain_error("moment: k must be >= 0");
  if (k == 0) return LogReal::from_linear(1.0);
  switch (family_) {
    case Family::delta:
      return p0_ == 0.0 ? LogReal{} : LogReal::from_log(k * std::log(p0_));
    case Family::uniform: {
      // (b^{k+1} - a^{k+1}) / ((k+1)(b-a))
      const double lb = std::log(p1_);
      double log_num;
      if (p0_ == 0.0) {
        log_num = (k + 1.0) * lb;
      } else {
        const double la = std::log(p0_);
        log_num = (k + 1.0) * lb + std::log1p(-std::exp((k + 1.0) * (la - lb)));
      }
      return LogReal::from_log(log_num - std::log(k + 1.0) - std::log(p1_ - p0_));
    }
    case Family::beta:
    case Family::arcsine: {
      // prod_{i=0}^{k-1} (alpha+i)/(alpha+beta+i)
      double lg = 0.0;
      for (int i = 0; i < k; ++i) lg += std::log((p0_ + i) / (p0_ + p1_ + i));
      return LogReal::from_log(lg);
    }
    case Family::polynomial:
      return LogReal::from_log(std::log((p0_ + 1.0) / (p0_ + k + 1.0)));
    case Family::u_quadratic: {
      // 12 * int x^k (x - 1/2)^2 dx on [0,1]
      const double v = 12.0 * (1.0 / (k + 3.0) - 1.0 / (k + 2.0) + 0.25 / (k + 1.0));
      return LogReal::from_linear(v);
    }
  }
  return {};
}

std::string ExtentDensity::tag() const {
  std::ostringstream os;
  switch (family_) {
    case Family::delta: os << "delta:" << p0_; break;
    case Family::uniform: os << "uniform:" << p0_ << "," << p1_; break;
    case Family::beta: os << "beta:" << p0_ << "," << p1_; break;
    case Family::arcsine: os << "arcsine"; break;
    case Family::polynomial: os << "polynomial:" << p0_; break;
    case Family::u_quadratic: os << "uquadratic"; break;
  }
  return os.str();
}

double density_body_extent(const ExtentDensity& density, RandomStream& rng) {
  return density.sample(rng);
}

}  // namespace nsmc
