// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsmc/analysis.hpp"
#include "nsmc/estimators.hpp"
#include "nsmc/geometry.hpp"
#include "nsmc/oracles.hpp"

namespace nsmc {

/// Invalid experiment configuration (maps to CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Body described by kind and parameters, instantiable at any dimension.
struct BodySpec {
  enum class Kind { sphere, cube, ellipsoid, shell, density };

  Kind kind = Kind::density;
  std::vector<double> params;  // sphere {r}; cube {edge}; ellipsoid {lo, hi}; shell {r_in, r_out}
  std::optional<ExtentDensity> density;

  static BodySpec make_sphere(double radius);
  static BodySpec make_cube(double edge);
  static BodySpec make_ellipsoid(double axis_lo, double axis_hi);
  static BodySpec make_shell(double r_in, double r_out);
  static BodySpec make_density(ExtentDensity d);

  std::unique_ptr<Body> build(int n) const;
  /// Semi-axes for the ellipsoid kind, spaced uniformly from lo to hi.
  std::vector<double> ellipsoid_axes(int n) const;
  std::optional<OracleValue> volume_oracle(int n) const;
  bool is_geometric() const { return kind != Kind::density; }
  std::string tag() const;
};

/// Integrand described by kind (+ polynomial coefficients).
struct IntegrandSpec {
  enum class Kind { gaussian, polynomial, xcoord };

  Kind kind = Kind::gaussian;
  std::vector<double> coeffs;  // polynomial only, lowest degree first

  static IntegrandSpec make_gaussian();
  static IntegrandSpec make_polynomial(std::vector<double> coeffs = {});
  static IntegrandSpec make_xcoord();

  RadialIntegrand build(int n, int nodes = 0) const;
  /// Closed form for domains with uniform(0, r0) extents; nullopt otherwise.
  std::optional<OracleValue> integral_oracle(int n, const BodySpec& domain) const;
  std::string tag() const;
};

/// Declarative description of a benchmark sweep.
struct ExperimentSpec {
  enum class Target { volume, integral };

  Target target = Target::volume;
  BodySpec body;
  std::optional<IntegrandSpec> integrand;
  std::vector<int> dimensions;
  std::vector<double> tolerances;
  int trials = 0;  // 0 picks the conventional default for the target
  StoppingRule::Mode stop_mode = StoppingRule::Mode::oracle_consecutive;
  int consecutive = 1000;
  std::uint64_t sample_budget = 10000000;
  std::uint64_t seed = 1;
  int workers = 1;
  double jitter_frac = 0.0;        // reference jitter radius as a fraction of the body scale
  int recentre_pairs_per_dim = 0;  // 0 = recentring off
  int recentre_passes = 1;
  int quadrature_nodes = 0;  // 0 = ceil((n+3)/2)

  int effective_trials() const;
  void validate() const;
};

/// One point of a samples-vs-dimension sweep (N averaged over trials).
struct SweepRecord {
  int dimension = 0;
  double tolerance = 0.0;
  double samples = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::string body_tag;
  std::string integrand_tag;
  bool budget_exceeded = false;  // any trial ran out of budget
};

/// Per-run record for one-shot estimations.
struct RunRecord {
  int dimension = 0;
  std::string body_tag;
  std::string integrand_tag;
  std::uint64_t samples = 0;
  std::uint64_t samples_required = 0;
  double mean = 0.0;
  double log_abs_mean = 0.0;
  int mean_sign = 0;
  double relative_std_error = 0.0;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string stop_mode;
  double wall_seconds = 0.0;
  bool budget_exceeded = false;
  bool ill_conditioned = false;
};

/// Volume sweep: per (dimension, tolerance, trial) jitter and recentre the
/// reference as configured, estimate with the configured stopping rule
/// against the body's closed-form volume, and average the required sample
/// counts over trials.
std::vector<SweepRecord> run_volume(const ExperimentSpec& spec);

/// Same for integrals (Gauss-Legendre radial quadrature inside).
std::vector<SweepRecord> run_integral(const ExperimentSpec& spec);

/// Dispatch on spec.target.
std::vector<SweepRecord> run_sweep(const ExperimentSpec& spec);

/// One estimation at a single (dimension, tolerance).
RunRecord run_single(const ExperimentSpec& spec, int dimension, double tolerance);

/// Fixed-budget estimation partitioned over `workers` disjoint streams
/// (stream ids 0..workers-1), merged in stream order; the result depends
/// only on (seed, workers, total_samples), never on scheduling.
Estimate estimate_volume_parallel(const Body& body, std::uint64_t seed, int workers,
                                  std::uint64_t total_samples);
Estimate estimate_integral_parallel(const Body& body, const RadialIntegrand& integrand,
                                    std::uint64_t seed, int workers,
                                    std::uint64_t total_samples);

/// Writes one "dimension samples" line per record (space-separated, sorted
/// ascending by dimension) plus a JSON metadata sidecar at path + ".meta.json".
void emit_csv(const std::vector<SweepRecord>& records, const std::string& path,
              const std::string& metadata_json);

/// Theory-side predictions for a density: samples needed at a relative
/// tolerance by the exact variance ratio, next to the envelope bound when
/// the density admits one.
struct TheoryRecord {
  int dimension = 0;
  double predicted_samples = 0.0;
  bool bound_available = false;
  double bound = 0.0;
  bool bound_valid = false;
};
std::vector<TheoryRecord> theory_table(const ExtentDensity& density,
                                       const std::vector<int>& dimensions, double tol);

}  // namespace nsmc
