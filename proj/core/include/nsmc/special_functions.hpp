// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace nsmc {

/// log of the regularized lower incomplete gamma P(a, x) = gamma(a,x)/Gamma(a).
/// Series expansion for x < a + 1, continued fraction for the complement
/// otherwise. Requires a > 0, x >= 0. P(a, 0) = 0 (returns -inf).
double log_gamma_p(double a, double x);

/// log of the lower incomplete gamma function gamma(a, x).
double log_lower_gamma(double a, double x);

/// Lower incomplete gamma in the linear domain (may underflow to 0 or
/// overflow to inf for extreme arguments; use log_lower_gamma there).
double lower_gamma(double a, double x);

}  // namespace nsmc
