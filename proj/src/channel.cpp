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

#include "lsapdma/channel.hpp"

#include <cmath>
#include <string>

namespace lsapdma {

void CellConfig::validate() const {
  if (!(radius_m > 0.0)) throw InvalidGeometry("cell radius must be positive");
  if (!(min_distance_m > 0.0) || !(min_distance_m < radius_m)) {
    throw InvalidGeometry("minimum distance must lie in (0, radius)");
  }
  if (!(path_loss_factor > 0.0)) throw InvalidGeometry("path loss factor must be positive");
  if (!(path_loss_exponent > 0.0)) throw InvalidGeometry("path loss exponent must be positive");
  if (!(reference_distance_m > 0.0)) throw InvalidGeometry("reference distance must be positive");
  if (!(shadow_std_db >= 0.0)) throw InvalidGeometry("shadowing deviation must be nonnegative");
  if (!(noise_variance > 0.0)) throw InvalidGeometry("noise variance must be positive");
}

UserDrop drop_users(const CellConfig& cfg, std::size_t users, const RngStream& rng) {
  cfg.validate();
  UserDrop drop;
  drop.positions.reserve(users);
  drop.distances.reserve(users);
  const double inner2 = cfg.min_distance_m * cfg.min_distance_m;
  const double outer2 = cfg.radius_m * cfg.radius_m;
  for (std::size_t k = 0; k < users; ++k) {
    RngStream stream = rng.substream(k);
    const double radius = std::sqrt(inner2 + stream.uniform() * (outer2 - inner2));
    const double angle = 2.0 * std::numbers::pi * stream.uniform();
    drop.positions.push_back({radius * std::cos(angle), radius * std::sin(angle)});
    drop.distances.push_back(std::min(radius, cfg.radius_m));
  }
  return drop;
}

double large_scale_gain(const CellConfig& cfg, double distance_m, RngStream& rng) {
  if (!(distance_m > 0.0) || !std::isfinite(distance_m)) {
    throw InvalidGeometry("distance must be positive, got " + std::to_string(distance_m));
  }
  const double path = cfg.path_loss_factor * std::pow(distance_m / cfg.reference_distance_m, -cfg.path_loss_exponent);
  if (cfg.shadow_std_db == 0.0) return path;
  const double shadow_db = cfg.shadow_std_db * rng.normal();
  return path * std::pow(10.0, shadow_db / 10.0);
}

ChannelMatrix sample_channel(Eigen::Index receive_antennas, Eigen::Index transmit_antennas,
                             double large_scale, RngStream& rng) {
  if (receive_antennas < 1 || transmit_antennas < 1) {
    throw InvalidDimension("channel needs at least one antenna on each side");
  }
  if (!(large_scale >= 0.0) || !std::isfinite(large_scale)) {
    throw DomainError("large-scale gain must be finite and nonnegative");
  }
  ChannelMatrix channel{CMatrix(receive_antennas, transmit_antennas), large_scale};
  for (Eigen::Index r = 0; r < receive_antennas; ++r) {
    for (Eigen::Index c = 0; c < transmit_antennas; ++c) {
      channel.entries(r, c) = rng.complex_normal(large_scale);
    }
  }
  return channel;
}

}  // namespace lsapdma
