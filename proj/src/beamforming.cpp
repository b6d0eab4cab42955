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

#include "lsapdma/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lsapdma {
namespace {

bool assign_beams(std::size_t beam, const std::vector<std::vector<std::size_t>>& candidates,
                  std::vector<bool>& taken, std::vector<std::size_t>& chosen) {
  if (beam == candidates.size()) return true;
  for (const std::size_t user : candidates[beam]) {
    if (taken[user]) continue;
    taken[user] = true;
    chosen[beam] = user;
    if (assign_beams(beam + 1, candidates, taken, chosen)) return true;
    taken[user] = false;
  }
  return false;
}

}  // namespace

SelectedUserSet select_users(const PatternMatrix& pattern, std::span<const double> gains_hint) {
  const auto n_beams = static_cast<std::size_t>(pattern.beams());
  const auto n_users = static_cast<std::size_t>(pattern.users());
  if (gains_hint.size() != n_users) throw ShapeError("one gain hint per user required");

  std::vector<std::vector<std::size_t>> candidates(n_beams);
  for (std::size_t n = 0; n < n_beams; ++n) {
    candidates[n] = pattern.covered_users(static_cast<Eigen::Index>(n));
    if (candidates[n].empty()) throw InvalidPattern("beam " + std::to_string(n) + " covers no user");
    std::stable_sort(candidates[n].begin(), candidates[n].end(),
                     [&](std::size_t a, std::size_t b) { return gains_hint[a] < gains_hint[b]; });
  }

  std::vector<bool> taken(n_users, false);
  SelectedUserSet omega{std::vector<std::size_t>(n_beams, 0)};
  if (!assign_beams(0, candidates, taken, omega.user_of_beam)) {
    throw InvalidPattern("pattern admits no distinct selected user per beam");
  }
  return omega;
}

CMatrix composite_channel(std::span<const ChannelMatrix> channels, const SelectedUserSet& omega) {
  if (omega.beams() == 0) throw ShapeError("empty selected-user set");
  const auto& first = channels[omega.user_of_beam.front()].entries;
  const Eigen::Index n_r = first.rows();
  const Eigen::Index n_t = first.cols();
  CMatrix g(static_cast<Eigen::Index>(omega.beams()) * n_r, n_t);
  for (std::size_t n = 0; n < omega.beams(); ++n) {
    const std::size_t user = omega.user_of_beam[n];
    if (user >= channels.size()) throw ShapeError("selected user index out of range");
    const auto& h = channels[user].entries;
    if (h.rows() != n_r || h.cols() != n_t) throw ShapeError("channel matrices differ in shape");
    g.middleRows(static_cast<Eigen::Index>(n) * n_r, n_r) = h;
  }
  return g;
}

BeamformerSet compute_zfbf(std::span<const ChannelMatrix> channels, const SelectedUserSet& omega,
                           const ZfOptions& options) {
  const CMatrix g = composite_channel(channels, omega);
  const Eigen::Index n_beams = static_cast<Eigen::Index>(omega.beams());
  const Eigen::Index n_r = g.rows() / n_beams;
  const Eigen::Index n_t = g.cols();
  if (g.rows() > n_t) {
    throw InvalidDimension("zero forcing needs N * N_R <= N_T (" + std::to_string(g.rows()) + " > " +
                           std::to_string(n_t) + ")");
  }

  // G_C = D S with D the per-user amplitude scaling; then
  // F_C = S^H (S S^H)^(-1) D^(-1). Working with S keeps the conditioning
  // independent of the path-loss spread between users.
  RVector amplitude(g.rows());
  for (Eigen::Index n = 0; n < n_beams; ++n) {
    const double gain = channels[omega.user_of_beam[static_cast<std::size_t>(n)]].large_scale_gain;
    if (!(gain > 0.0) || !std::isfinite(gain)) throw SingularChannel("selected user has zero large-scale gain");
    amplitude.segment(n * n_r, n_r).setConstant(std::sqrt(gain));
  }
  const CMatrix s = amplitude.cwiseInverse().asDiagonal() * g;
  if (!s.allFinite()) throw NumericError("non-finite composite channel");

  const CMatrix gram = s * s.adjoint();
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > options.max_condition) {
    throw SingularChannel("composite channel is rank deficient (condition " + std::to_string(hi / lo) + ")");
  }

  const Eigen::LLT<CMatrix> llt(gram);
  if (llt.info() != Eigen::Success) throw SingularChannel("Cholesky factorization of G_C G_C^H failed");
  // F_C^H = (S S^H)^(-1) S, the Gram matrix being Hermitian.
  const CMatrix fc_adj = llt.solve(s);
  BeamformerSet out;
  out.composite = fc_adj.adjoint() * amplitude.cwiseInverse().asDiagonal();

  out.beams.resize(n_t, n_beams);
  for (Eigen::Index n = 0; n < n_beams; ++n) {
    out.beams.col(n) = out.composite.middleCols(n * n_r, n_r).rowwise().sum();
    if (options.normalize_beams) {
      const double norm = out.beams.col(n).norm();
      if (!(norm > 0.0)) throw SingularChannel("zero beamforming vector");
      out.beams.col(n) /= norm;
    }
  }
  return out;
}

CVector transmit(const BeamformerSet& beamformer, const CVector& superposed) {
  if (superposed.size() != beamformer.beam_count()) throw ShapeError("superposed signal length must equal N");
  return beamformer.beams * superposed;
}

}  // namespace lsapdma
