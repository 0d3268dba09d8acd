// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "nsmc/geometry.hpp"
#include "nsmc/log_real.hpp"
#include "nsmc/sampling.hpp"

namespace nsmc {

/// Streaming sum in log space: keeps the running maximum exponent and the
/// sum of rescaled terms. Adding N equal terms yields exactly max + log(N).
class LogSumAccumulator {
 public:
  void add(double log_term);
  void merge(const LogSumAccumulator& other);
  bool empty() const { return scaled_sum_ == 0.0; }
  /// log of the accumulated total (-inf when empty).
  double log_total() const;

 private:
  double max_log_ = -std::numeric_limits<double>::infinity();
  double scaled_sum_ = 0.0;
};

enum class StopReason { fixed_budget, criterion_met, budget_exceeded };

/// Running estimate of v_n E[R^n] or s_n E[i(s)], kept in log-safe form.
/// Summands enter as LogReal; positive and negative parts accumulate
/// separately and combine at read time.
class Estimate {
 public:
  /// log_prefactor: log of the constant in front of the sample mean
  /// (log v_n for volumes, log s_n for integrals).
  explicit Estimate(double log_prefactor = 0.0);

  /// Numerically stable streaming update with one summand.
  void add(LogReal summand);

  /// Deterministic ordered merge of a partitioned accumulation.
  void merge(const Estimate& other);

  std::uint64_t count() const { return count_; }

  /// Estimate in the linear domain (prefactor times sample mean);
  /// saturates to 0/inf when unrepresentable. Throws if count is 0.
  double mean() const;
  /// log |mean| and its sign; the log form is exact deep into under- and
  /// overflow territory.
  double log_abs_mean() const;
  int mean_sign() const;

  /// Sample standard deviation of the summands divided by |mean of the
  /// summands| sqrt(N). Zero when N < 2 or when all summands are equal;
  /// +inf when the summands cancel to zero exactly.
  double relative_std_error() const;

  /// max(positive, negative) accumulated magnitude over |their difference|;
  /// large values mean the estimate lives on a knife's edge of cancellation.
  double cancellation_ratio() const;
  /// cancellation_ratio() > 1e6
  bool ill_conditioned() const;

  double log_prefactor() const { return log_prefactor_; }

  StopReason stop_reason() const { return stop_reason_; }
  void set_stop_reason(StopReason r) { stop_reason_ = r; }

  /// For oracle-consecutive runs: the index of the first sample of the
  /// in-tolerance run that triggered the stop (the "samples required"
  /// statistic). Equal to count() otherwise.
  std::uint64_t samples_required() const { return samples_required_ ? *samples_required_ : count_; }
  void set_samples_required(std::uint64_t n) { samples_required_ = n; }

 private:
  double log_sum_signed(int* sign) const;

  LogSumAccumulator pos_;
  LogSumAccumulator neg_;
  LogSumAccumulator squares_;
  std::uint64_t count_ = 0;
  double log_prefactor_ = 0.0;
  // spread bookkeeping for exact zero-variance detection
  double min_log_ = std::numeric_limits<double>::infinity();
  double max_log_ = -std::numeric_limits<double>::infinity();
  bool sign_mixed_ = false;
  int first_sign_ = 0;
  StopReason stop_reason_ = StopReason::fixed_budget;
  std::optional<std::uint64_t> samples_required_;
};

/// update_estimate: free-function form of the streaming update.
inline Estimate& update_estimate(Estimate& state, LogReal summand) {
  state.add(summand);
  return state;
}

/// When and how an estimation loop stops.
struct StoppingRule {
  enum class Mode { fixed_samples, oracle_consecutive, se_threshold };

  Mode mode = Mode::fixed_samples;
  std::uint64_t sample_budget = 100000;  // exact count for fixed mode, cap otherwise
  double tol = 0.1;
  int consecutive = 1000;          // K for oracle_consecutive
  LogReal oracle;                  // required for oracle_consecutive
  std::uint64_t min_samples = 100; // floor for se_threshold

  static StoppingRule fixed(std::uint64_t n);
  static StoppingRule oracle_consecutive(LogReal oracle_value, double tol, int k = 1000,
                                         std::uint64_t budget = 10000000);
  static StoppingRule se_threshold(double tol, std::uint64_t budget = 10000000,
                                   std::uint64_t min_samples = 100);

  void validate() const;
};

/// Volume estimate v_n/N sum R_i^n over a single-valued extent body.
/// All powers live in the log domain, so dimensions in the hundreds are fine.
Estimate estimate_volume(const Body& body, DirectionStream& stream, const StoppingRule& stop);

/// Volume of a body with a multi-valued extent function: each summand is
/// the alternating sum of extent powers, signs negated when the reference
/// point lies outside the body (even crossing count).
Estimate estimate_volume_multivalued(const Body& body, DirectionStream& stream,
                                     const StoppingRule& stop);

/// Integrand h with the dimension and radial quadrature order riding along.
/// Radially symmetric polynomials h(r) = sum_k c_k r^k may also supply their
/// coefficients (lowest degree first); the quadrature then evaluates the node
/// terms in one extended-precision Horner pass, which keeps the result exact
/// through the near-total cancellations of oscillatory polynomials.
struct RadialIntegrand {
  std::function<double(const Point&)> h;
  std::vector<double> radial_poly;
  int dimension = 0;
  int nodes = 0;  // 0 picks the default ceil((n+3)/2)
  std::string label = "integrand";

  int effective_nodes() const { return nodes > 0 ? nodes : (dimension + 4) / 2; }
};

/// Gauss-Legendre approximation of i(s) = int_0^extent rho^{n-1} h(rho s) drho,
/// with rho^{n-1} evaluated inside the integrand (exact for polynomial h of
/// total degree <= 2 m_q - 1 - (n-1)). Node terms are assembled in log space.
LogReal radial_partial_integral_log(double extent, const Direction& s,
                                    const RadialIntegrand& integrand);

/// Same, in the linear domain, querying the body for the extent
/// (single-valued geometric bodies).
double radial_partial_integral(const Body& body, const Direction& s,
                               const RadialIntegrand& integrand);

/// s_n/N sum i(s_k): volume-style Monte Carlo over directions with a
/// deterministic radial quadrature per direction.
Estimate estimate_integral(const Body& body, const RadialIntegrand& integrand,
                           DirectionStream& stream, const StoppingRule& stop);

/// Moves the reference point toward the body's centre using antithetic
/// extent pairs. Per batch of pairs the chord midpoints p + (r+ - r-)/2 s
/// define least-squares constraints s.(c - p) = (r+ - r-)/2 on the centre;
/// the reference moves by half the solved step, re-checked against
/// membership (step halved on violation, up to 60 times).
Point recentre_reference(const Body& body, DirectionStream& stream, int pairs, int passes);

}  // namespace nsmc
