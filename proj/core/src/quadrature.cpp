// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#include "nsmc/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nsmc {

namespace {

// Legendre P_m and its derivative at x via the three-term recurrence.
void legendre(int m, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= m; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = m == 0 ? 1.0 : p1;
  dp = m == 0 ? 0.0 : m * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

std::vector<QuadratureNode> gauss_legendre(int m) {
  if (m < 1) throw std::domain_error("gauss_legendre: node count must be >= 1");

  std::vector<QuadratureNode> nodes(static_cast<std::size_t>(m));
  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess, then Newton on P_m.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(m, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    legendre(m, x, p, dp);  // derivative at the converged node
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = {-x, w};
    nodes[static_cast<std::size_t>(m - 1 - i)] = {x, w};
  }
  if (m % 2 == 1) nodes[static_cast<std::size_t>(m / 2)].x = 0.0;
  return nodes;
}

}  // namespace nsmc
