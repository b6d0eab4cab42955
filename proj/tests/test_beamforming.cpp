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

#include <vector>

#include "lsapdma/beamforming.hpp"

using namespace lsapdma;

namespace {

std::vector<ChannelMatrix> random_channels(std::size_t users, Eigen::Index n_r, Eigen::Index n_t, RngStream& rng,
                                           bool spread = false) {
  std::vector<ChannelMatrix> out;
  for (std::size_t k = 0; k < users; ++k) {
    const double ls = spread ? std::pow(10.0, -8.0 * rng.uniform()) : 1.0;
    out.push_back(sample_channel(n_r, n_t, ls, rng));
  }
  return out;
}

SelectedUserSet first_users(std::size_t n) {
  SelectedUserSet omega;
  for (std::size_t i = 0; i < n; ++i) omega.user_of_beam.push_back(i);
  return omega;
}

}  // namespace

TEST_CASE("select users picks the weakest covered user per beam") {
  const std::vector<double> one{0.3};
  CHECK(select_users(PatternMatrix::from_rows({{1}}), one).user_of_beam == std::vector<std::size_t>{0});

  const auto eq5 = PatternMatrix::from_rows({{1, 1, 0, 1, 0}, {1, 1, 1, 0, 0}, {1, 0, 1, 0, 1}});
  const std::vector<double> ascending{1, 2, 3, 4, 5};
  const auto omega = select_users(eq5, ascending);
  CHECK(omega.user_of_beam[0] == 0);
  CHECK(omega.contains(0, 0));
  for (std::size_t n = 0; n < 3; ++n) CHECK(eq5.covers(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(omega.user_of_beam[n])));

  // Tie between users 1 and 2 on beam 1: the lower index wins.
  const auto tie = PatternMatrix::from_rows({{1, 0, 0}, {0, 1, 1}, {1, 0, 1}});
  const std::vector<double> hints{0.5, 2.0, 2.0};
  CHECK(select_users(tie, hints).user_of_beam[1] == 1);

  // A common positive scale of the hints leaves the selection unchanged.
  RngStream rng(3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> h(5), scaled(5);
    for (std::size_t k = 0; k < 5; ++k) {
      h[k] = rng.uniform();
      scaled[k] = 37.5 * h[k];
    }
    CHECK(select_users(eq5, h).user_of_beam == select_users(eq5, scaled).user_of_beam);
  }

  CHECK_THROWS_AS(select_users(PatternMatrix::from_rows({{1, 1}, {0, 0}}), std::vector<double>{1, 2}),
                  InvalidPattern);
  CHECK_THROWS_AS(select_users(eq5, std::vector<double>{1, 2}), ShapeError);
}

TEST_CASE("selected users are distinct so the composite channel has full rank") {
  // The weakest user covers every beam; the other beams fall back to the
  // next weakest covered user.
  const auto b = PatternMatrix::from_rows({{1, 1, 0}, {1, 0, 1}});
  const auto omega = select_users(b, std::vector<double>{0.1, 0.5, 0.2});
  CHECK(omega.user_of_beam[0] == 0);
  CHECK(omega.user_of_beam[1] == 2);
  CHECK_THROWS_AS(select_users(PatternMatrix::from_rows({{1, 0}, {1, 0}, {0, 1}}), std::vector<double>{1, 2}),
                  InvalidPattern);
}

TEST_CASE("zero forcing on a unit channel") {
  ChannelMatrix g{CMatrix::Zero(1, 4), 1.0};
  g.entries(0, 0) = 1.0;
  const std::vector<ChannelMatrix> channels{g};
  const auto bf = compute_zfbf(channels, first_users(1));
  CVector e1 = CVector::Zero(4);
  e1(0) = 1.0;
  CHECK((bf.beams.col(0) - e1).norm() < 1e-15);
}

TEST_CASE("zero forcing identity and beam shapes") {
  RngStream rng(1000, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto channels = random_channels(3, 4, 16, rng, trial % 2 == 1);
    const auto omega = first_users(3);
    const auto bf = compute_zfbf(channels, omega);
    CHECK(bf.composite.rows() == 16);
    CHECK(bf.composite.cols() == 12);
    CHECK(bf.beams.rows() == 16);
    CHECK(bf.beams.cols() == 3);
    const CMatrix gc = composite_channel(channels, omega);
    // Relative to the scale of G_C F_C, which is O(1) by construction.
    worst = std::max(worst, (gc * bf.composite - CMatrix::Identity(12, 12)).cwiseAbs().maxCoeff());
    for (Eigen::Index n = 0; n < 3; ++n) CHECK(bf.beams.col(n).norm() == doctest::Approx(1.0));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("beam vectors are block sums and leak nothing to other selected users") {
  RngStream rng(7, 1);
  const auto channels = random_channels(3, 4, 16, rng);
  const auto omega = first_users(3);
  const auto raw = compute_zfbf(channels, omega, ZfOptions{.normalize_beams = false});
  for (Eigen::Index n = 0; n < 3; ++n) {
    CVector sum = CVector::Zero(16);
    for (Eigen::Index c = 0; c < 4; ++c) sum += raw.composite.col(n * 4 + c);
    CHECK((raw.beams.col(n) - sum).cwiseAbs().maxCoeff() == 0.0);
  }
  for (Eigen::Index m = 0; m < 3; ++m) {
    for (Eigen::Index n = 0; n < 3; ++n) {
      const CVector y = channels[static_cast<std::size_t>(m)].entries * raw.beams.col(n);
      const CVector want = CVector::Constant(4, m == n ? 1.0 : 0.0);
      CHECK((y - want).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  const auto normalized = compute_zfbf(channels, omega);
  for (Eigen::Index n = 0; n < 3; ++n) {
    CHECK((normalized.beams.col(n) - raw.beams.col(n).normalized()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("zero forcing errors") {
  RngStream rng(2, 2);
  const auto wide = random_channels(3, 6, 16, rng);
  CHECK_THROWS_AS(compute_zfbf(wide, first_users(3)), InvalidDimension);

  auto channels = random_channels(3, 4, 16, rng);
  channels[2] = channels[1];
  CHECK_THROWS_AS(compute_zfbf(channels, first_users(3)), SingularChannel);

  SelectedUserSet repeated{{0, 0, 1}};
  CHECK_THROWS_AS(compute_zfbf(random_channels(3, 4, 16, rng), repeated), SingularChannel);
}

TEST_CASE("transmit") {
  RngStream rng(5, 5);
  const auto channels = random_channels(3, 4, 16, rng);
  const auto bf = compute_zfbf(channels, first_users(3));
  CHECK(transmit(bf, CVector::Zero(3)).isZero(0.0));
  CHECK_THROWS_AS(transmit(bf, CVector::Zero(2)), ShapeError);
  CVector t(3);
  t << Complex(1, -1), Complex(0.5, 2), Complex(-3, 0.25);
  const CVector x = transmit(bf, t);
  for (Eigen::Index i = 0; i < 16; ++i) {
    Complex naive = 0.0;
    for (Eigen::Index n = 0; n < 3; ++n) naive += bf.beams(i, n) * t(n);
    CHECK(std::abs(x(i) - naive) < 1e-14);
  }

  BeamformerSet single;
  single.beams = CMatrix::Zero(4, 1);
  single.beams(0, 0) = 1.0;
  CVector c(1);
  c(0) = Complex(2.0, -1.0);
  const CVector y = transmit(single, c);
  CHECK(y(0) == c(0));
  CHECK(y.tail(3).isZero(0.0));
}
