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

#ifndef LSAPDMA_CHANNEL_HPP
#define LSAPDMA_CHANNEL_HPP

#include <vector>

#include "lsapdma/common.hpp"
#include "lsapdma/rng.hpp"

namespace lsapdma {

/// Single-cell geometry and propagation parameters.
///
/// Large-scale gain follows c * (d / d_ref)^(-eta) * 10^(X/10) with
/// X ~ N(0, shadow_std_db^2) and d_ref = reference_distance_m.
/// Users are never placed closer than min_distance_m to the base station.
struct CellConfig {
  double radius_m = 800.0;
  double min_distance_m = 10.0;
  double path_loss_factor = 1.0;
  double path_loss_exponent = 3.7;
  double reference_distance_m = 1.0;
  double shadow_std_db = 10.0;
  double noise_variance = 1.0;

  /// Throws InvalidGeometry on any out-of-range field.
  void validate() const;
};

struct Position {
  double x = 0.0;
  double y = 0.0;
};

struct UserDrop {
  std::vector<Position> positions;
  std::vector<double> distances;

  [[nodiscard]] std::size_t size() const noexcept { return positions.size(); }
};

struct ChannelMatrix {
  CMatrix entries;  // N_R x N_T
  double large_scale_gain = 1.0;

  [[nodiscard]] Eigen::Index receive_antennas() const noexcept { return entries.rows(); }
  [[nodiscard]] Eigen::Index transmit_antennas() const noexcept { return entries.cols(); }
};

/// K users uniform by area on the annulus [min_distance_m, radius_m].
/// User k is drawn from rng.substream(k), so a drop of K users is a prefix of
/// any larger drop made from the same stream.
UserDrop drop_users(const CellConfig& cfg, std::size_t users, const RngStream& rng);

/// Path loss with one log-normal shadowing draw.
double large_scale_gain(const CellConfig& cfg, double distance_m, RngStream& rng);

/// i.i.d. CN(0, large_scale) entries.
ChannelMatrix sample_channel(Eigen::Index receive_antennas, Eigen::Index transmit_antennas,
                             double large_scale, RngStream& rng);

}  // namespace lsapdma

#endif  // LSAPDMA_CHANNEL_HPP
