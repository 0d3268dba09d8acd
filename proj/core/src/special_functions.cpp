// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#include "nsmc/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nsmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxIter = 500;
constexpr double kEps = 1e-16;

// log P(a,x) by the power series, valid (and fast) for x < a + 1:
//   P(a,x) = x^a e^-x / Gamma(a+1) * sum_k x^k / ((a+1)...(a+k))
double log_p_series(double a, double x) {
  double term = 1.0;
  double sum = 1.0;
  double ap = a;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return a * std::log(x) - x - std::lgamma(a + 1.0) + std::log(sum);
}

// log Q(a,x) by the Lentz continued fraction, valid for x >= a + 1:
//   Q(a,x) = x^a e^-x / Gamma(a) * CF(a,x)
double log_q_continued_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return a * std::log(x) - x - std::lgamma(a) + std::log(h);
}

}  // namespace

double log_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) {
    throw std::domain_error("log_gamma_p: requires a > 0 and x >= 0");
  }
  if (x == 0.0) return -kInf;
  if (x < a + 1.0) return log_p_series(a, x);
  const double log_q = log_q_continued_fraction(a, x);
  // P = 1 - Q; Q <= ~0.5 in this regime so the subtraction is benign.
  return std::log1p(-std::exp(log_q));
}

double log_lower_gamma(double a, double x) {
  if (x == 0.0) return -kInf;
  return log_gamma_p(a, x) + std::lgamma(a);
}

double lower_gamma(double a, double x) { return std::exp(log_lower_gamma(a, x)); }

}  // namespace nsmc
