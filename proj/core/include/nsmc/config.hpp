// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "nsmc/harness.hpp"

namespace nsmc {

/// "7", "5,20,50" or "10..100:10" (inclusive range with step).
std::vector<int> parse_dimensions(const std::string& text);

/// Comma-separated doubles.
std::vector<double> parse_double_list(const std::string& text);

/// "delta:R", "uniform:A,B", "beta:A,B", "arcsine", "polynomial:M",
/// "uquadratic".
ExtentDensity parse_density(const std::string& text);

/// "sphere:R", "cube:E", "ellipsoid:LO..HI", "shell:RIN,ROUT", or any
/// density expression (which builds a density-synthetic body).
BodySpec parse_body(const std::string& text);

/// "gaussian", "xcoord", "polynomial" (the oscillatory cubic) or
/// "polynomial:c0,c1,...".
IntegrandSpec parse_integrand(const std::string& text);

/// "fixed", "oracle" or "se".
StoppingRule::Mode parse_stop_mode(const std::string& text);
std::string stop_mode_name(StoppingRule::Mode mode);

/// JSON round trip for sweep specs; the same schema is written into the
/// metadata sidecar of every emitted data file.
std::string experiment_spec_to_json(const ExperimentSpec& spec, double wall_seconds = -1.0);
ExperimentSpec experiment_spec_from_json(const std::string& text);
ExperimentSpec load_experiment_spec(const std::string& path);

}  // namespace nsmc
