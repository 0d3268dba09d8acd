// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#include "nsmc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nsmc/analysis.hpp"
#include "nsmc/quadrature.hpp"

namespace nsmc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// --- LogSumAccumulator ------------------------------------------------------

void LogSumAccumulator::add(double log_term) {
  if (log_term == -kInf) return;
  if (scaled_sum_ == 0.0) {
    max_log_ = log_term;
    scaled_sum_ = 1.0;
    return;
  }
  if (log_term <= max_log_) {
    scaled_sum_ += std::exp(log_term - max_log_);
  } else {
    scaled_sum_ = scaled_sum_ * std::exp(max_log_ - log_term) + 1.0;
    max_log_ = log_term;
  }
}

void LogSumAccumulator::merge(const LogSumAccumulator& other) {
  if (other.empty()) return;
  if (empty()) {
    *this = other;
    return;
  }
  if (other.max_log_ <= max_log_) {
    scaled_sum_ += other.scaled_sum_ * std::exp(other.max_log_ - max_log_);
  } else {
    scaled_sum_ = scaled_sum_ * std::exp(max_log_ - other.max_log_) + other.scaled_sum_;
    max_log_ = other.max_log_;
  }
}

double LogSumAccumulator::log_total() const {
  if (empty()) return -kInf;
  return max_log_ + std::log(scaled_sum_);
}

// --- Estimate ----------------------------------------------------------------

Estimate::Estimate(double log_prefactor) : log_prefactor_(log_prefactor) {}

void Estimate::add(LogReal summand) {
  ++count_;
  const double lg = summand.log_abs();
  if (!summand.is_zero()) {
    (summand.sign() > 0 ? pos_ : neg_).add(lg);
    squares_.add(2.0 * lg);
  }
  min_log_ = std::min(min_log_, lg);
  max_log_ = std::max(max_log_, lg);
  if (first_sign_ == 0 && count_ == 1) {
    first_sign_ = summand.sign();
  } else if (summand.sign() != first_sign_) {
    sign_mixed_ = true;
  }
}

void Estimate::merge(const Estimate& other) {
  if (other.log_prefactor_ != log_prefactor_) {
    throw std::logic_error("Estimate::merge: mismatched prefactors");
  }
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  pos_.merge(other.pos_);
  neg_.merge(other.neg_);
  squares_.merge(other.squares_);
  count_ += other.count_;
  min_log_ = std::min(min_log_, other.min_log_);
  max_log_ = std::max(max_log_, other.max_log_);
  if (other.sign_mixed_ || other.first_sign_ != first_sign_) sign_mixed_ = true;
  stop_reason_ = std::max(stop_reason_, other.stop_reason_);
  samples_required_.reset();
}

double Estimate::log_sum_signed(int* sign) const {
  const double lp = pos_.log_total();
  const double ln = neg_.log_total();
  if (lp == -kInf && ln == -kInf) {
    *sign = 0;
    return -kInf;
  }
  if (lp == ln) {
    *sign = 0;
    return -kInf;
  }
  const double big = std::max(lp, ln);
  const double small = std::min(lp, ln);
  *sign = lp > ln ? 1 : -1;
  if (small == -kInf) return big;
  const double m = -std::expm1(small - big);
  return big + std::log(m);
}

double Estimate::mean() const {
  if (count_ == 0) throw std::logic_error("Estimate::mean: no samples");
  int sign = 0;
  const double lg = log_sum_signed(&sign);
  if (sign == 0) return 0.0;
  return sign * std::exp(log_prefactor_ + lg - std::log(static_cast<double>(count_)));
}

double Estimate::log_abs_mean() const {
  if (count_ == 0) throw std::logic_error("Estimate::log_abs_mean: no samples");
  int sign = 0;
  const double lg = log_sum_signed(&sign);
  if (sign == 0) return -kInf;
  return log_prefactor_ + lg - std::log(static_cast<double>(count_));
}

int Estimate::mean_sign() const {
  int sign = 0;
  log_sum_signed(&sign);
  return sign;
}

double Estimate::relative_std_error() const {
  if (count_ < 2) return 0.0;
  if (!sign_mixed_ && min_log_ == max_log_) return 0.0;  // identical summands
  int sign = 0;
  const double lg = log_sum_signed(&sign);
  if (sign == 0) return kInf;
  // Var = (Q - S^2/N)/(N-1); rse^2 = Var / (N mean^2) = (Q N / S^2 - 1)/(N-1)
  const double log_n = std::log(static_cast<double>(count_));
  const double rho = std::exp(squares_.log_total() + log_n - 2.0 * lg);
  return std::sqrt(std::fmax(rho - 1.0, 0.0) / static_cast<double>(count_ - 1));
}

double Estimate::cancellation_ratio() const {
  const double lp = pos_.log_total();
  const double ln = neg_.log_total();
  if (lp == -kInf && ln == -kInf) return 0.0;
  int sign = 0;
  const double lg = log_sum_signed(&sign);
  if (sign == 0) return kInf;
  return std::exp(std::max(lp, ln) - lg);
}

bool Estimate::ill_conditioned() const { return cancellation_ratio() > 1e6; }

// --- StoppingRule --------------------------------------------------------------

StoppingRule StoppingRule::fixed(std::uint64_t n) {
  StoppingRule r;
  r.mode = Mode::fixed_samples;
  r.sample_budget = n;
  return r;
}

StoppingRule StoppingRule::oracle_consecutive(LogReal oracle_value, double tol, int k,
                                              std::uint64_t budget) {
  StoppingRule r;
  r.mode = Mode::oracle_consecutive;
  r.oracle = oracle_value;
  r.tol = tol;
  r.consecutive = k;
  r.sample_budget = budget;
  return r;
}

StoppingRule StoppingRule::se_threshold(double tol, std::uint64_t budget,
                                        std::uint64_t min_samples) {
  StoppingRule r;
  r.mode = Mode::se_threshold;
  r.tol = tol;
  r.sample_budget = budget;
  r.min_samples = min_samples;
  return r;
}

void StoppingRule::validate() const {
  if (sample_budget < 1) throw std::domain_error("StoppingRule: sample budget must be >= 1");
  if (mode == Mode::fixed_samples) return;
  if (!(tol > 0.0)) throw std::domain_error("StoppingRule: tol must be > 0");
  if (mode == Mode::oracle_consecutive) {
    if (consecutive < 1) throw std::domain_error("StoppingRule: consecutive count must be >= 1");
    if (oracle.is_zero()) {
      throw std::domain_error("StoppingRule: oracle-consecutive mode requires an oracle value");
    }
  }
}

// --- estimation driver -----------------------------------------------------------

namespace {

template <typename SummandFn>
Estimate run_estimation(double log_prefactor, DirectionStream& stream, const StoppingRule& stop,
                        SummandFn&& summand) {
  stop.validate();
  Estimate est(log_prefactor);

  const bool oracle_mode = stop.mode == StoppingRule::Mode::oracle_consecutive;
  const bool se_mode = stop.mode == StoppingRule::Mode::se_threshold;
  double lo_log = 0.0, hi_log = 0.0, oracle_log = 0.0;
  int oracle_sign = 0;
  if (oracle_mode) {
    oracle_sign = stop.oracle.sign();
    oracle_log = stop.oracle.log_abs();
    lo_log = stop.tol < 1.0 ? std::log1p(-stop.tol) : -kInf;
    hi_log = std::log1p(stop.tol);
  }

  int consecutive = 0;
  for (std::uint64_t i = 1;; ++i) {
    const Direction& s = stream.next();
    est.add(summand(s, stream.rng()));

    if (oracle_mode) {
      bool in_tol = false;
      if (est.mean_sign() == oracle_sign) {
        const double d = est.log_abs_mean() - oracle_log;
        in_tol = d >= lo_log && d <= hi_log;
      }
      if (in_tol) {
        if (++consecutive == stop.consecutive) {
          est.set_stop_reason(StopReason::criterion_met);
          est.set_samples_required(i - static_cast<std::uint64_t>(stop.consecutive) + 1);
          break;
        }
      } else {
        consecutive = 0;
      }
    } else if (se_mode) {
      if (i >= stop.min_samples && est.relative_std_error() <= stop.tol) {
        est.set_stop_reason(StopReason::criterion_met);
        break;
      }
    }

    if (i >= stop.sample_budget) {
      est.set_stop_reason(stop.mode == StoppingRule::Mode::fixed_samples
                              ? StopReason::fixed_budget
                              : StopReason::budget_exceeded);
      break;
    }
  }
  return est;
}

void check_stream_matches(const Body& body, const DirectionStream& stream) {
  if (body.dimension() != stream.dimension()) {
    throw std::domain_error("direction stream dimension does not match body dimension");
  }
}

double checked_extent(double r) {
  if (!std::isfinite(r) || r < 0.0) {
    throw std::domain_error("body returned a non-finite or negative extent");
  }
  return r;
}

}  // namespace

Estimate estimate_volume(const Body& body, DirectionStream& stream, const StoppingRule& stop) {
  check_stream_matches(body, stream);
  const int n = body.dimension();
  const double log_vn = unit_sphere_volume(n).log_abs();
  return run_estimation(log_vn, stream, stop, [&](const Direction& s, RandomStream& rng) {
    const double r = checked_extent(body.extent(s, &rng));
    return LogReal::from_log(n * std::log(r));
  });
}

Estimate estimate_volume_multivalued(const Body& body, DirectionStream& stream,
                                     const StoppingRule& stop) {
  check_stream_matches(body, stream);
  const int n = body.dimension();
  const double log_vn = unit_sphere_volume(n).log_abs();
  std::vector<double> crossings;
  return run_estimation(log_vn, stream, stop, [&](const Direction& s, RandomStream& rng) {
    body.extents(s, crossings, &rng);
    const int count = static_cast<int>(crossings.size());
    // Alternating sum, positive sign on the outermost extent; an even count
    // (reference outside) is the inside rule with all signs negated.
    LogReal sum;
    for (int j = count; j >= 1; --j) {
      const double r = checked_extent(crossings[static_cast<std::size_t>(j - 1)]);
      const int sign = (count - j) % 2 == 0 ? 1 : -1;
      sum += LogReal::from_log(n * std::log(r), sign);
    }
    return sum;
  });
}

// --- radial quadrature --------------------------------------------------------------

namespace {

LogReal radial_partial_core(double extent, const Direction& s, const RadialIntegrand& integrand,
                            const std::vector<QuadratureNode>& nodes, Point& scratch) {
  if (!std::isfinite(extent) || extent < 0.0) {
    throw std::domain_error("radial quadrature requires a finite nonnegative extent");
  }
  if (extent == 0.0) return {};
  const int n = integrand.dimension;
  const bool radial_poly = !integrand.radial_poly.empty();
  // rho^{n-1} spans the full exponent range only for large n; stay in the
  // linear domain (extended precision, the node terms can cancel hard)
  // whenever the largest term is representable, otherwise assemble the sum
  // in log space.
  const bool linear_ok = (n - 1) * std::log(extent) > -650.0;
  long double linear_sum = 0.0L;
  LogReal log_sum;
  for (const auto& node : nodes) {
    const double rho = 0.5 * extent * (node.x + 1.0);
    long double h;
    if (radial_poly) {
      h = 0.0L;
      for (std::size_t k = integrand.radial_poly.size(); k-- > 0;) {
        h = h * rho + integrand.radial_poly[k];
      }
    } else {
      for (int i = 0; i < n; ++i) scratch[i] = rho * s[i];
      h = integrand.h(scratch);
    }
    if (!std::isfinite(static_cast<double>(h))) {
      std::ostringstream os;
      os << "integrand evaluated to a non-finite value at radius " << rho;
      throw std::runtime_error(os.str());
    }
    if (h == 0.0L) continue;
    if (linear_ok) {
      const long double weight = 0.5L * extent * node.w;
      linear_sum += weight * powl(rho, n - 1) * h;
    } else {
      const double hd = static_cast<double>(h);
      const double log_term = std::log(0.5 * extent * node.w) + (n - 1) * std::log(rho) +
                              std::log(std::fabs(hd));
      log_sum += LogReal::from_log(log_term, hd > 0.0 ? 1 : -1);
    }
  }
  return linear_ok ? LogReal::from_linear(static_cast<double>(linear_sum)) : log_sum;
}

void validate_integrand(const RadialIntegrand& integrand) {
  if (integrand.dimension < 1) {
    throw std::domain_error("RadialIntegrand: dimension must be >= 1");
  }
  if (!integrand.h && integrand.radial_poly.empty()) {
    throw std::domain_error("RadialIntegrand: missing integrand function");
  }
  if (integrand.effective_nodes() < 1) {
    throw std::domain_error("RadialIntegrand: node count must be >= 1");
  }
}

}  // namespace

LogReal radial_partial_integral_log(double extent, const Direction& s,
                                    const RadialIntegrand& integrand) {
  validate_integrand(integrand);
  const auto nodes = gauss_legendre(integrand.effective_nodes());
  Point scratch = Point::origin(integrand.dimension);
  return radial_partial_core(extent, s, integrand, nodes, scratch);
}

double radial_partial_integral(const Body& body, const Direction& s,
                               const RadialIntegrand& integrand) {
  if (body.dimension() != integrand.dimension) {
    throw std::domain_error("integrand dimension does not match body dimension");
  }
  return radial_partial_integral_log(body.extent(s), s, integrand).linear();
}

Estimate estimate_integral(const Body& body, const RadialIntegrand& integrand,
                           DirectionStream& stream, const StoppingRule& stop) {
  check_stream_matches(body, stream);
  validate_integrand(integrand);
  if (body.dimension() != integrand.dimension) {
    throw std::domain_error("integrand dimension does not match body dimension");
  }
  const int n = body.dimension();
  const double log_sn = unit_sphere_area(n).log_abs();
  const auto nodes = gauss_legendre(integrand.effective_nodes());
  Point scratch = Point::origin(n);
  return run_estimation(log_sn, stream, stop, [&](const Direction& s, RandomStream& rng) {
    const double r = checked_extent(body.extent(s, &rng));
    return radial_partial_core(r, s, integrand, nodes, scratch);
  });
}

// --- recentring --------------------------------------------------------------------

namespace {

// Solves A x = b for symmetric positive definite A (row-major), in place.
// Returns false if the Cholesky factorization breaks down.
bool cholesky_solve(std::vector<double>& a, std::vector<double>& b, int n) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < j; ++k) {
        s -= a[static_cast<std::size_t>(i) * n + k] * a[static_cast<std::size_t>(j) * n + k];
      }
      if (i == j) {
        if (!(s > 0.0)) return false;
        a[static_cast<std::size_t>(i) * n + j] = std::sqrt(s);
      } else {
        a[static_cast<std::size_t>(i) * n + j] = s / a[static_cast<std::size_t>(j) * n + j];
      }
    }
  }
  for (int i = 0; i < n; ++i) {  // forward
    double s = b[static_cast<std::size_t>(i)];
    for (int k = 0; k < i; ++k) s -= a[static_cast<std::size_t>(i) * n + k] * b[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(i)] = s / a[static_cast<std::size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {  // backward
    double s = b[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < n; ++k) s -= a[static_cast<std::size_t>(k) * n + i] * b[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(i)] = s / a[static_cast<std::size_t>(i) * n + i];
  }
  return true;
}

}  // namespace

Point recentre_reference(const Body& body, DirectionStream& stream, int pairs, int passes) {
  if (pairs < 1) throw std::domain_error("recentre_reference: pairs must be >= 1");
  if (passes < 1) throw std::domain_error("recentre_reference: passes must be >= 1");
  check_stream_matches(body, stream);
  if (!body.has_membership()) {
    throw std::logic_error("recentre_reference: body must support membership queries");
  }
  const int n = body.dimension();
  Point p = body.reference();
  if (!body.contains(p)) {
    throw std::domain_error("recentre_reference: reference must start inside the body");
  }
  std::unique_ptr<Body> current = body.with_reference(p);

  std::vector<double> gram(static_cast<std::size_t>(n) * n);
  std::vector<double> rhs(static_cast<std::size_t>(n));

  for (int pass = 0; pass < passes; ++pass) {
    int remaining = pairs;
    while (remaining > 0) {
      const int batch = std::min(remaining, 4 * n);
      remaining -= batch;

      std::fill(gram.begin(), gram.end(), 0.0);
      std::fill(rhs.begin(), rhs.end(), 0.0);
      for (int k = 0; k < batch; ++k) {
        const Direction& s = stream.next();
        const double forward = current->extent(s);
        const double backward = current->extent(s.negated());
        const double midpoint_offset = 0.5 * (forward - backward);
        for (int i = 0; i < n; ++i) {
          rhs[static_cast<std::size_t>(i)] += midpoint_offset * s[i];
          for (int j = 0; j <= i; ++j) {
            gram[static_cast<std::size_t>(i) * n + j] += s[i] * s[j];
          }
        }
      }
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          gram[static_cast<std::size_t>(i) * n + j] = gram[static_cast<std::size_t>(j) * n + i];
        }
      }
      double trace = 0.0;
      for (int i = 0; i < n; ++i) trace += gram[static_cast<std::size_t>(i) * n + i];
      for (int i = 0; i < n; ++i) {
        gram[static_cast<std::size_t>(i) * n + i] += 1e-9 * trace / n + 1e-300;
      }
      if (!cholesky_solve(gram, rhs, n)) {
        throw std::runtime_error("recentre_reference: singular direction system");
      }

      // Half step toward the least-squares centre, halved further while the
      // candidate lands outside the body.
      std::vector<double> step(rhs);
      for (auto& v : step) v *= 0.5;
      std::unique_ptr<Body> moved;
      Point candidate = p;
      for (int attempt = 0;; ++attempt) {
        if (attempt >= 60) {
          throw std::runtime_error("recentre_reference: failed to stay inside the body");
        }
        for (int i = 0; i < n; ++i) candidate[i] = p[i] + step[static_cast<std::size_t>(i)];
        try {
          moved = current->with_reference(candidate);
          break;
        } catch (const std::domain_error&) {
          for (auto& v : step) v *= 0.5;
        }
      }
      p = candidate;
      current = std::move(moved);
    }
  }
  return p;
}

}  // namespace nsmc
