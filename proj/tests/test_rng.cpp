// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <initializer_list>

#include "pairgen/rng.hpp"

using pairgen::Rng;

TEST_CASE("uniform doubles live in [0, 1) with the right first moments") {
  Rng rng(123);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::fabs(mean - 0.5) < 5.0 / std::sqrt(12.0 * n));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("poisson draws match the law across both sampler regimes") {
  // small means use inversion, large ones the transformed rejection
  for (double mean : {0.3, 3.0, 12.0, 29.9, 30.1, 120.0, 3250.0}) {
    Rng rng(static_cast<std::uint64_t>(mean * 1000) + 7);
    const int n = 60000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto k = rng.poisson(mean);
      CHECK(k >= 0);
      sum += static_cast<double>(k);
      sum2 += static_cast<double>(k) * static_cast<double>(k);
    }
    const double m = sum / n;
    const double v = sum2 / n - m * m;
    // 5 sigma on the sample mean; variance must track the mean
    CHECK(std::fabs(m - mean) < 5.0 * std::sqrt(mean / n));
    CHECK(v == doctest::Approx(mean).epsilon(0.05));
  }
  Rng rng(1);
  CHECK(rng.poisson(0.0) == 0);
  CHECK(rng.poisson(-1.0) == 0);
}

TEST_CASE("substreams are reproducible and decorrelated") {
  Rng a = Rng::substream(42, 0);
  Rng b = Rng::substream(42, 0);
  Rng c = Rng::substream(42, 1);
  Rng d = Rng::substream(43, 0);
  const std::uint64_t first_a = a.next_u64();
  CHECK(first_a == b.next_u64());
  CHECK(first_a != c.next_u64());
  CHECK(first_a != d.next_u64());

  // adjacent substreams should not produce correlated uniforms
  Rng e = Rng::substream(7, 100);
  Rng f = Rng::substream(7, 101);
  double dot = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    dot += (e.next_double() - 0.5) * (f.next_double() - 0.5);
  }
  CHECK(std::fabs(dot / n) < 5.0 / (12.0 * std::sqrt(static_cast<double>(n))));
}
