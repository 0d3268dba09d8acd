// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace nsmc {

/// A real number stored as (sign, log of magnitude).
///
/// Quantities such as R^n with n in the hundreds overflow or underflow
/// IEEE doubles long before the estimators care; every accumulation that
/// can meet such magnitudes runs on LogReal instead of raw doubles. Zero
/// is represented as sign 0 with log magnitude -inf.
class LogReal {
 public:
  constexpr LogReal() = default;

  static LogReal from_log(double log_magnitude, int sign = 1) {
    LogReal r;
    if (sign == 0 || log_magnitude == -inf()) {
      return r;
    }
    r.log_mag_ = log_magnitude;
    r.sign_ = sign > 0 ? 1 : -1;
    return r;
  }

  static LogReal from_linear(double x) {
    LogReal r;
    if (x == 0.0) return r;
    r.sign_ = x > 0 ? 1 : -1;
    r.log_mag_ = std::log(std::fabs(x));
    return r;
  }

  bool is_zero() const { return sign_ == 0; }
  int sign() const { return sign_; }
  double log_abs() const { return log_mag_; }

  /// Linear-domain value; saturates to 0 / +-inf when unrepresentable.
  double linear() const {
    if (sign_ == 0) return 0.0;
    return sign_ * std::exp(log_mag_);
  }

  LogReal operator-() const {
    LogReal r = *this;
    r.sign_ = -r.sign_;
    return r;
  }

  LogReal abs() const {
    LogReal r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
  }

  friend LogReal operator*(const LogReal& a, const LogReal& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return from_log(a.log_mag_ + b.log_mag_, a.sign_ * b.sign_);
  }

  friend LogReal operator/(const LogReal& a, const LogReal& b) {
    if (a.is_zero()) return {};
    return from_log(a.log_mag_ - b.log_mag_, a.sign_ * b.sign_);
  }

  friend LogReal operator+(const LogReal& a, const LogReal& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    // Work relative to the larger magnitude.
    const LogReal& big = a.log_mag_ >= b.log_mag_ ? a : b;
    const LogReal& small = a.log_mag_ >= b.log_mag_ ? b : a;
    const double d = small.log_mag_ - big.log_mag_;  // <= 0
    if (big.sign_ == small.sign_) {
      return from_log(big.log_mag_ + std::log1p(std::exp(d)), big.sign_);
    }
    const double m = -std::expm1(d);  // 1 - exp(d), exact when d == 0
    if (m == 0.0) return {};
    return from_log(big.log_mag_ + std::log(m), big.sign_);
  }

  friend LogReal operator-(const LogReal& a, const LogReal& b) { return a + (-b); }

  LogReal& operator+=(const LogReal& o) { return *this = *this + o; }
  LogReal& operator*=(const LogReal& o) { return *this = *this * o; }

  /// this^k for integer k (magnitude scaling in log domain).
  LogReal pow_int(int k) const {
    if (is_zero()) return k == 0 ? from_linear(1.0) : LogReal{};
    int s = (sign_ < 0 && (k % 2 != 0)) ? -1 : 1;
    return from_log(log_mag_ * k, s);
  }

  friend bool operator==(const LogReal& a, const LogReal& b) {
    return a.sign_ == b.sign_ && (a.sign_ == 0 || a.log_mag_ == b.log_mag_);
  }

 private:
  static constexpr double inf() { return std::numeric_limits<double>::infinity(); }

  double log_mag_ = -std::numeric_limits<double>::infinity();
  std::int8_t sign_ = 0;
};

}  // namespace nsmc
