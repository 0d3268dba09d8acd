// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace nsmc {

struct QuadratureNode {
  double x;  // abscissa in (-1, 1)
  double w;  // weight
};

/// Gauss-Legendre nodes and weights on [-1, 1], exact for polynomials of
/// degree <= 2m - 1. Nodes are returned ascending and exactly symmetric
/// about 0 (the half-rule is mirrored).
std::vector<QuadratureNode> gauss_legendre(int m);

}  // namespace nsmc
