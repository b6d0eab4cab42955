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

#ifndef LSAPDMA_BEAMFORMING_HPP
#define LSAPDMA_BEAMFORMING_HPP

#include <span>
#include <vector>

#include "lsapdma/channel.hpp"
#include "lsapdma/common.hpp"
#include "lsapdma/pattern.hpp"

namespace lsapdma {

/// The set of (beam, selected user) pairs whose CSI defines the precoder.
struct SelectedUserSet {
  std::vector<std::size_t> user_of_beam;

  [[nodiscard]] std::size_t beams() const noexcept { return user_of_beam.size(); }
  [[nodiscard]] bool contains(std::size_t beam, std::size_t user) const {
    return beam < user_of_beam.size() && user_of_beam[beam] == user;
  }
};

/// For each beam, the covered user with the smallest hint (ties: lowest
/// index), subject to each beam getting a different user: the composite
/// channel must have full row rank. Beams are filled in index order and the
/// first assignment found in weakest-first preference order is returned.
SelectedUserSet select_users(const PatternMatrix& pattern, std::span<const double> gains_hint);

struct BeamformerSet {
  CMatrix composite;  // F_C, N_T x (N * N_R)
  CMatrix beams;      // F = [f_1 ... f_N], N_T x N

  [[nodiscard]] Eigen::Index beam_count() const noexcept { return beams.cols(); }
};

struct ZfOptions {
  // Rescale each f_n to unit norm so per-beam powers are radiated powers.
  bool normalize_beams = true;
  // Threshold on the condition number of the gain-normalized Gram matrix.
  double max_condition = 1e8;
};

/// Stacked channel of the selected users, G_C = [G_1sel^H ... G_Nsel^H]^H.
CMatrix composite_channel(std::span<const ChannelMatrix> channels, const SelectedUserSet& omega);

/// F_C = G_C^H (G_C G_C^H)^(-1), f_n = F_n 1.
/// Throws SingularChannel when the Gram matrix of the selected users'
/// small-scale channels is too ill-conditioned, InvalidDimension when
/// N * N_R > N_T.
BeamformerSet compute_zfbf(std::span<const ChannelMatrix> channels, const SelectedUserSet& omega,
                           const ZfOptions& options = {});

/// x = F t.
CVector transmit(const BeamformerSet& beamformer, const CVector& superposed);

}  // namespace lsapdma

#endif  // LSAPDMA_BEAMFORMING_HPP
