// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsmc {

/// Unit vector on S^{n-1}. Invariant: |components| = 1 within 1e-12.
class Direction {
 public:
  Direction() = default;

  /// Validating constructor; throws std::domain_error if not unit length.
  static Direction from_components(std::vector<double> c);

  /// Takes components that are already normalized (sampler fast path).
  static Direction from_unit_unchecked(std::vector<double> c) {
    Direction d;
    d.c_ = std::move(c);
    return d;
  }

  int dimension() const { return static_cast<int>(c_.size()); }
  const std::vector<double>& components() const { return c_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

  Direction negated() const {
    std::vector<double> m(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) m[i] = -c_[i];
    return from_unit_unchecked(std::move(m));
  }

 private:
  friend class DirectionStream;  // refills the buffer in place when sampling
  std::vector<double> c_;
};

/// Point in R^n (same length units as body extents).
struct Point {
  std::vector<double> x;

  Point() = default;
  explicit Point(std::vector<double> coords) : x(std::move(coords)) {
    for (double v : x) {
      if (!std::isfinite(v)) throw std::domain_error("Point: non-finite coordinate");
    }
  }
  static Point origin(int n) { return Point(std::vector<double>(static_cast<std::size_t>(n), 0.0)); }

  int dimension() const { return static_cast<int>(x.size()); }
  double operator[](int i) const { return x[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return x[static_cast<std::size_t>(i)]; }

  double norm() const {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  }
};

/// Boundary crossings from a reference point along one direction,
/// strictly ascending.
struct ExtentSample {
  Direction direction;
  std::vector<double> extents;
};

}  // namespace nsmc
