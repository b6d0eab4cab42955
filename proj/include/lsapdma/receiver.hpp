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

#ifndef LSAPDMA_RECEIVER_HPP
#define LSAPDMA_RECEIVER_HPP

#include <span>
#include <vector>

#include "lsapdma/beamforming.hpp"
#include "lsapdma/channel.hpp"
#include "lsapdma/common.hpp"
#include "lsapdma/pattern.hpp"

namespace lsapdma {

/// Per-user MMSE spatial filter V_k, N_R x N. Column n serves beam n.
struct SpatialFilter {
  CMatrix matrix;
};

/// V_k = (G_k F A F^H G_k^H + sigma2 I)^(-1) G_k F A.
SpatialFilter mmse_filter(const ChannelMatrix& channel, const BeamformerSet& beamformer, const RMatrix& correlation,
                          double sigma2);

/// Equivalent normalized gain h_nk: desired-beam amplitude over the square
/// root of inter-beam leakage plus filtered noise. A zero filter column gives 0.
double normalized_gain(const SpatialFilter& filter, const ChannelMatrix& channel, const BeamformerSet& beamformer,
                       double sigma2, Eigen::Index beam);

/// h_nk for every beam and user (N x K), filters built from `correlation`.
RMatrix equivalent_gains(std::span<const ChannelMatrix> channels, const BeamformerSet& beamformer,
                         const RMatrix& correlation, double sigma2);

/// Covered users sorted by ascending gain, ties by ascending index.
std::vector<std::size_t> sic_order(const RVector& gains, std::span<const std::size_t> covered);

/// SIC orders for all beams; the covered set of beam n is row n of `support`.
std::vector<std::vector<std::size_t>> sic_orders(const RMatrix& gains, const SupportMask& support);

/// SINR of every user on one beam. The user at SIC position j is interfered
/// by the powers at positions j+1..end; the last position is interference
/// free. Users absent from `order` get 0.
RVector sinr(const RVector& gains, const RVector& powers, std::span<const std::size_t> order);

/// log2(1 + sinr).
inline double rate_from_sinr(double value) { return std::log1p(value) / kLn2; }

struct LinkState {
  RMatrix gains;
  std::vector<std::vector<std::size_t>> sic_orders;
  RMatrix sinrs;
  RMatrix rates;
};

/// SIC ordering, SINRs and rates for a merged power matrix. `coverage`
/// decides which users take part in each beam's SIC chain.
LinkState evaluate_link(const RMatrix& gains, const PowerAllocation& power, const SupportMask& coverage);

/// Sum over beams, then users, of log2(1 + gamma_nk).
double sum_rate(const LinkState& link);

}  // namespace lsapdma

#endif  // LSAPDMA_RECEIVER_HPP
