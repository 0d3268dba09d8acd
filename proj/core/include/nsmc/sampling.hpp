// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>

#include "nsmc/random.hpp"
#include "nsmc/types.hpp"

namespace nsmc {

/// Seeded, partitionable source of uniform directions on S^{n-1}.
///
/// (seed, stream_id, counter) determines the next direction; handing each
/// worker its own stream_id makes parallel runs reproducible regardless of
/// scheduling. Directions come from n iid standard normals, normalized.
class DirectionStream {
 public:
  DirectionStream(int n, std::uint64_t seed, std::uint64_t stream_id = 0);

  int dimension() const { return n_; }
  std::uint64_t seed() const { return rng_.seed(); }
  std::uint64_t stream_id() const { return rng_.stream_id(); }
  std::uint64_t counter() const { return counter_; }

  /// Next direction without allocating; the reference stays valid until the
  /// next call on this stream.
  const Direction& next();

  /// Underlying scalar stream (consumed in sequence with the directions;
  /// density-synthetic bodies draw their extents from it).
  RandomStream& rng() { return rng_; }

 private:
  int n_;
  RandomStream rng_;
  std::uint64_t counter_ = 0;
  Direction scratch_;
};

/// One iid uniform direction (value-returning form of DirectionStream::next).
Direction sample_direction(DirectionStream& stream);

/// Antithetic pair (s, -s); the first element is an iid uniform direction.
std::pair<Direction, Direction> antithetic_pair(DirectionStream& stream);

}  // namespace nsmc
