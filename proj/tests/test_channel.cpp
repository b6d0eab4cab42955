// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The lsa-pdma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lsapdma/channel.hpp"

using namespace lsapdma;

TEST_CASE("cell config validation") {
  CellConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.radius_m = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidGeometry);
  cfg = {};
  cfg.noise_variance = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidGeometry);
  cfg = {};
  cfg.shadow_std_db = -1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidGeometry);
  cfg = {};
  cfg.min_distance_m = 900.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidGeometry);
}

TEST_CASE("user drops") {
  const CellConfig cfg;
  const RngStream rng(5, 0);
  CHECK(drop_users(cfg, 0, rng).size() == 0);

  const UserDrop drop = drop_users(cfg, 5, rng);
  REQUIRE(drop.size() == 5);
  for (std::size_t k = 0; k < drop.size(); ++k) {
    CHECK(drop.distances[k] <= 800.0);
    CHECK(drop.distances[k] >= cfg.min_distance_m);
    CHECK(std::hypot(drop.positions[k].x, drop.positions[k].y) == doctest::Approx(drop.distances[k]));
  }

  // Same stream, bit-identical drop; a larger drop extends a smaller one.
  const UserDrop again = drop_users(cfg, 5, rng);
  const UserDrop bigger = drop_users(cfg, 8, rng);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(again.positions[k].x == drop.positions[k].x);
    CHECK(again.positions[k].y == drop.positions[k].y);
    CHECK(bigger.distances[k] == drop.distances[k]);
  }
}

TEST_CASE("squared radius is uniform on (d_min^2, R^2)") {
  const CellConfig cfg;
  const std::size_t n = 100000;
  const UserDrop drop = drop_users(cfg, n, RngStream(11, 4));
  std::vector<double> r2(n);
  for (std::size_t k = 0; k < n; ++k) r2[k] = drop.distances[k] * drop.distances[k];
  std::sort(r2.begin(), r2.end());
  const double lo = cfg.min_distance_m * cfg.min_distance_m;
  const double hi = cfg.radius_m * cfg.radius_m;
  double ks = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cdf = (r2[i] - lo) / (hi - lo);
    ks = std::max({ks, std::abs(cdf - static_cast<double>(i) / n), std::abs(cdf - static_cast<double>(i + 1) / n)});
  }
  CHECK(ks < 0.01);
}

TEST_CASE("large-scale gain") {
  CellConfig cfg;
  cfg.shadow_std_db = 0.0;
  RngStream rng(1, 1);
  CHECK(large_scale_gain(cfg, 1.0, rng) == doctest::Approx(1.0));
  CHECK(large_scale_gain(cfg, 10.0, rng) == doctest::Approx(std::pow(10.0, -3.7)).epsilon(1e-12));
  CHECK(large_scale_gain(cfg, 10.0, rng) == doctest::Approx(1.995e-4).epsilon(1e-3));
  CHECK_THROWS_AS(large_scale_gain(cfg, 0.0, rng), InvalidGeometry);
  CHECK_THROWS_AS(large_scale_gain(cfg, -3.0, rng), InvalidGeometry);

  double previous = large_scale_gain(cfg, 10.0, rng);
  for (double d = 20.0; d <= 800.0; d += 10.0) {
    const double g = large_scale_gain(cfg, d, rng);
    CHECK(g < previous);
    previous = g;
  }

  cfg.reference_distance_m = 1000.0;
  CHECK(large_scale_gain(cfg, 1000.0, rng) == doctest::Approx(1.0));
  CHECK(large_scale_gain(cfg, 500.0, rng) == doctest::Approx(std::pow(0.5, -3.7)));

  // Shadowing in dB has the configured spread around the path loss.
  CellConfig shadowed;
  RngStream srng(3, 9);
  const int n = 50000;
  double sum = 0.0;
  double sum2 = 0.0;
  const double path_db = 10.0 * std::log10(std::pow(100.0, -3.7));
  for (int i = 0; i < n; ++i) {
    const double x = 10.0 * std::log10(large_scale_gain(shadowed, 100.0, srng)) - path_db;
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 5.0 * 10.0 / std::sqrt(n));
  CHECK(std::sqrt(sum2 / n - mean * mean) == doctest::Approx(10.0).epsilon(0.02));
}

TEST_CASE("small-scale channel samples") {
  RngStream rng(8, 2);
  const ChannelMatrix zero = sample_channel(4, 16, 0.0, rng);
  CHECK(zero.entries.rows() == 4);
  CHECK(zero.entries.cols() == 16);
  CHECK(zero.entries.isZero(0.0));
  CHECK_THROWS(sample_channel(0, 16, 1.0, rng));

  const ChannelMatrix big = sample_channel(100, 1000, 1.0, rng);
  const double n = static_cast<double>(big.entries.size());
  const double var = big.entries.cwiseAbs2().sum() / n;
  const double re = big.entries.real().array().square().sum() / n;
  const double im = big.entries.imag().array().square().sum() / n;
  CHECK(var >= 0.99);
  CHECK(var <= 1.01);
  CHECK(re == doctest::Approx(0.5).epsilon(0.02));
  CHECK(im == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(big.entries.mean()) < 0.01);
  CHECK(big.entries.allFinite());

  const ChannelMatrix scaled = sample_channel(50, 200, 2.5, rng);
  CHECK(scaled.entries.cwiseAbs2().mean() == doctest::Approx(2.5).epsilon(0.03));
  CHECK(scaled.large_scale_gain == 2.5);

  RngStream a(77, 1);
  RngStream b(77, 1);
  CHECK(sample_channel(4, 16, 1.0, a).entries == sample_channel(4, 16, 1.0, b).entries);
}
