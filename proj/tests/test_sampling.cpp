// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nsmc/geometry.hpp"
#include "nsmc/sampling.hpp"

using namespace nsmc;

TEST_CASE("sampled directions have unit norm") {
  for (int n : {1, 2, 3, 7, 50}) {
    DirectionStream stream(n, 42, 0);
    for (int i = 0; i < 200; ++i) {
      const Direction& s = stream.next();
      double norm2 = 0.0;
      for (int k = 0; k < n; ++k) norm2 += s[k] * s[k];
      CHECK(std::fabs(std::sqrt(norm2) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("n=1 directions are exactly +1 or -1") {
  DirectionStream stream(1, 7);
  bool saw_plus = false, saw_minus = false;
  for (int i = 0; i < 64; ++i) {
    const Direction& s = stream.next();
    CHECK((s[0] == 1.0 || s[0] == -1.0));
    saw_plus = saw_plus || s[0] == 1.0;
    saw_minus = saw_minus || s[0] == -1.0;
  }
  CHECK(saw_plus);
  CHECK(saw_minus);
}

TEST_CASE("component moments match the uniform sphere distribution (n=5)") {
  const int n = 5;
  const int samples = 1000000;
  DirectionStream stream(n, 20260810, 0);
  std::vector<double> mean(n, 0.0);
  std::vector<double> cov(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < samples; ++i) {
    const Direction& s = stream.next();
    for (int a = 0; a < n; ++a) {
      mean[a] += s[a];
      for (int b = 0; b <= a; ++b) cov[static_cast<std::size_t>(a) * n + b] += s[a] * s[b];
    }
  }
  for (int a = 0; a < n; ++a) {
    CHECK(std::fabs(mean[a] / samples) <= 0.004);
    for (int b = 0; b <= a; ++b) {
      const double expected = a == b ? 1.0 / n : 0.0;
      CHECK(std::fabs(cov[static_cast<std::size_t>(a) * n + b] / samples - expected) <= 0.005);
    }
  }
}

TEST_CASE("antithetic pairs negate exactly") {
  DirectionStream stream(9, 3);
  for (int i = 0; i < 100; ++i) {
    const auto [s, neg] = antithetic_pair(stream);
    for (int k = 0; k < 9; ++k) {
      CHECK(neg[k] == -s[k]);
      CHECK(s[k] + neg[k] == 0.0);
    }
  }
}

TEST_CASE("centered sphere sees equal extents along an antithetic pair") {
  const SphereBody ball(6, 2.5);
  DirectionStream stream(6, 11);
  for (int i = 0; i < 50; ++i) {
    const auto [s, neg] = antithetic_pair(stream);
    CHECK(ball.extent(s) == ball.extent(neg));
  }
}

TEST_CASE("identical (seed, stream_id) reproduces the sequence bit for bit") {
  DirectionStream a(8, 1234, 5);
  DirectionStream b(8, 1234, 5);
  for (int i = 0; i < 500; ++i) {
    const Direction& sa = a.next();
    const Direction& sb = b.next();
    for (int k = 0; k < 8; ++k) CHECK(sa[k] == sb[k]);
  }
  CHECK(a.counter() == 500);
}

TEST_CASE("distinct stream ids decorrelate") {
  DirectionStream a(8, 1234, 0);
  DirectionStream b(8, 1234, 1);
  int identical = 0;
  for (int i = 0; i < 100; ++i) {
    if (a.next()[0] == b.next()[0]) ++identical;
  }
  CHECK(identical == 0);
}

TEST_CASE("direction stream rejects n < 1") {
  CHECK_THROWS_AS(DirectionStream(0, 1), std::domain_error);
}
