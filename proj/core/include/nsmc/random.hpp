// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace nsmc {

/// Counter-keyed pseudo-random stream (xoshiro256++ seeded via splitmix64).
///
/// A stream is fully determined by (seed, stream_id); distinct stream ids
/// give statistically independent sequences, so workers can be handed
/// disjoint streams up front and results never depend on scheduling.
/// Normal deviates use the Marsaglia polar method, which keeps the whole
/// sequence reproducible across platforms (the standard library's
/// normal_distribution is implementation-defined).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal deviate.
  double normal();

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  double spare_normal_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace nsmc
