// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#include "nsmc/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace nsmc {

Direction Direction::from_components(std::vector<double> c) {
  if (c.empty()) throw std::domain_error("Direction: dimension must be >= 1");
  double s = 0;
  for (double v : c) s += v * v;
  if (std::fabs(std::sqrt(s) - 1.0) > 1e-12) {
    throw std::domain_error("Direction: components are not unit length");
  }
  return from_unit_unchecked(std::move(c));
}

DirectionStream::DirectionStream(int n, std::uint64_t seed, std::uint64_t stream_id)
    : n_(n), rng_(seed, stream_id) {
  if (n < 1) throw std::domain_error("DirectionStream: dimension must be >= 1");
  scratch_ = Direction::from_unit_unchecked(std::vector<double>(static_cast<std::size_t>(n), 0.0));
}

const Direction& DirectionStream::next() {
  auto& c = scratch_.c_;
  if (n_ == 1) {
    // S^0 is just a sign.
    c[0] = std::signbit(rng_.normal()) ? -1.0 : 1.0;
    ++counter_;
    return scratch_;
  }
  double norm2;
  do {
    norm2 = 0.0;
    for (auto& v : c) {
      v = rng_.normal();
      norm2 += v * v;
    }
  } while (norm2 == 0.0);  // probability ~0, redrawn internally
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& v : c) v *= inv;
  ++counter_;
  return scratch_;
}

Direction sample_direction(DirectionStream& stream) { return stream.next(); }

std::pair<Direction, Direction> antithetic_pair(DirectionStream& stream) {
  Direction s = stream.next();
  Direction neg = s.negated();
  return {std::move(s), std::move(neg)};
}

}  // namespace nsmc
