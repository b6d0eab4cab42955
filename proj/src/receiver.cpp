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

#include "lsapdma/receiver.hpp"

#include <algorithm>
#include <cmath>

namespace lsapdma {

SpatialFilter mmse_filter(const ChannelMatrix& channel, const BeamformerSet& beamformer, const RMatrix& correlation,
                          double sigma2) {
  const Eigen::Index n = beamformer.beam_count();
  if (correlation.rows() != n || correlation.cols() != n) throw ShapeError("correlation matrix must be N x N");
  if (channel.entries.cols() != beamformer.beams.rows()) throw ShapeError("channel and beamformer disagree on N_T");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw DomainError("noise variance must be positive");
  if (!channel.entries.allFinite() || !beamformer.beams.allFinite() || !correlation.allFinite()) {
    throw NumericError("non-finite input to MMSE filter");
  }

  const CMatrix effective = channel.entries * beamformer.beams;  // G_k F, N_R x N
  const CMatrix cross = effective * correlation.cast<Complex>();  // G_k F A
  CMatrix covariance = cross * effective.adjoint();
  covariance.diagonal().array() += sigma2;
  // Hermitian positive definite thanks to the sigma2 I term.
  const Eigen::LDLT<CMatrix> ldlt(covariance);
  if (ldlt.info() != Eigen::Success) throw NumericError("MMSE covariance factorization failed");
  return SpatialFilter{ldlt.solve(cross)};
}

double normalized_gain(const SpatialFilter& filter, const ChannelMatrix& channel, const BeamformerSet& beamformer,
                       double sigma2, Eigen::Index beam) {
  const Eigen::Index n = beamformer.beam_count();
  if (filter.matrix.cols() != n || filter.matrix.rows() != channel.entries.rows()) {
    throw ShapeError("filter must be N_R x N");
  }
  if (beam < 0 || beam >= n) throw ShapeError("beam index out of range");
  const CVector v = filter.matrix.col(beam);
  const double v_norm2 = v.squaredNorm();
  if (v_norm2 == 0.0) return 0.0;

  // Row vector of v^H G_k f_i for every beam i.
  const Eigen::RowVectorXcd response = v.adjoint() * (channel.entries * beamformer.beams);
  const double desired = std::norm(response(beam));
  double leakage = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i != beam) leakage += std::norm(response(i));
  }
  const double denominator = leakage + sigma2 * v_norm2;
  return std::sqrt(desired / denominator);
}

RMatrix equivalent_gains(std::span<const ChannelMatrix> channels, const BeamformerSet& beamformer,
                         const RMatrix& correlation, double sigma2) {
  const Eigen::Index n = beamformer.beam_count();
  RMatrix gains(n, static_cast<Eigen::Index>(channels.size()));
  for (std::size_t k = 0; k < channels.size(); ++k) {
    const SpatialFilter filter = mmse_filter(channels[k], beamformer, correlation, sigma2);
    for (Eigen::Index beam = 0; beam < n; ++beam) {
      gains(beam, static_cast<Eigen::Index>(k)) = normalized_gain(filter, channels[k], beamformer, sigma2, beam);
    }
  }
  return gains;
}

std::vector<std::size_t> sic_order(const RVector& gains, std::span<const std::size_t> covered) {
  std::vector<std::size_t> order(covered.begin(), covered.end());
  for (const std::size_t k : order) {
    if (static_cast<Eigen::Index>(k) >= gains.size()) throw ShapeError("covered user index out of range");
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ga = gains(static_cast<Eigen::Index>(a));
    const double gb = gains(static_cast<Eigen::Index>(b));
    if (ga != gb) return ga < gb;
    return a < b;
  });
  return order;
}

std::vector<std::vector<std::size_t>> sic_orders(const RMatrix& gains, const SupportMask& support) {
  if (support.rows() != gains.rows() || support.cols() != gains.cols()) throw ShapeError("support must match gains");
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(gains.rows()));
  for (Eigen::Index n = 0; n < gains.rows(); ++n) {
    std::vector<std::size_t> covered;
    for (Eigen::Index k = 0; k < gains.cols(); ++k) {
      if (support(n, k)) covered.push_back(static_cast<std::size_t>(k));
    }
    out[static_cast<std::size_t>(n)] = sic_order(gains.row(n).transpose(), covered);
  }
  return out;
}

RVector sinr(const RVector& gains, const RVector& powers, std::span<const std::size_t> order) {
  if (gains.size() != powers.size()) throw ShapeError("gains and powers must have equal length");
  if ((powers.array() < 0.0).any()) throw DomainError("negative power");
  RVector out = RVector::Zero(gains.size());
  double stronger = 0.0;  // sum of powers later in the SIC chain
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto k = static_cast<Eigen::Index>(*it);
    if (k >= gains.size()) throw ShapeError("SIC order index out of range");
    const double h2 = gains(k) * gains(k);
    out(k) = h2 * powers(k) / (1.0 + h2 * stronger);
    stronger += powers(k);
  }
  return out;
}

LinkState evaluate_link(const RMatrix& gains, const PowerAllocation& power, const SupportMask& coverage) {
  if (power.entries.rows() != gains.rows() || power.entries.cols() != gains.cols()) {
    throw ShapeError("power matrix must match gains");
  }
  LinkState link;
  link.gains = gains;
  link.sic_orders = sic_orders(gains, coverage);
  link.sinrs = RMatrix::Zero(gains.rows(), gains.cols());
  for (Eigen::Index n = 0; n < gains.rows(); ++n) {
    link.sinrs.row(n) = sinr(gains.row(n).transpose(), power.entries.row(n).transpose(),
                             link.sic_orders[static_cast<std::size_t>(n)])
                            .transpose();
  }
  link.rates = link.sinrs.unaryExpr([](double g) { return rate_from_sinr(g); });
  return link;
}

double sum_rate(const LinkState& link) {
  double total = 0.0;
  for (Eigen::Index n = 0; n < link.rates.rows(); ++n) {
    for (Eigen::Index k = 0; k < link.rates.cols(); ++k) total += link.rates(n, k);
  }
  return total;
}

}  // namespace lsapdma
