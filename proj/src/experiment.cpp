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

#include "lsapdma/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "lsapdma/beamforming.hpp"
#include "lsapdma/channel.hpp"
#include "lsapdma/receiver.hpp"

namespace lsapdma {
namespace {

constexpr std::uint64_t kUserTag = 1;
constexpr std::uint64_t kShadowTag = 2;
constexpr std::uint64_t kFadingTag = 3;
constexpr int kMaxRedraws = 100;

std::vector<std::size_t> weakest_first(const std::vector<double>& large_scale) {
  std::vector<std::size_t> order(large_scale.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return large_scale[a] < large_scale[b]; });
  return order;
}

PatternMatrix build_pattern(const ExperimentConfig& cfg, const SeriesSpec& series,
                            const std::vector<std::size_t>& order) {
  const std::size_t n = cfg.beams_of(series);
  switch (series.scheme) {
    case Scheme::kOma:
      return identity_pattern(n, order);
    case Scheme::kPnoma:
      return diversity_one_pattern(n, series.users, order);
    case Scheme::kLsaPdma:
      break;
  }
  switch (series.pattern) {
    case PatternSource::kSimple:
      return simple_beam_allocation(n, series.users, order);
    case PatternSource::kIdentity:
      return identity_pattern(n, order);
    case PatternSource::kDiversityOne:
      return diversity_one_pattern(n, series.users, order);
    case PatternSource::kConfigured:
      break;
  }
  // Column j of the configured block belongs to the j-th weakest user.
  Eigen::MatrixXi entries = Eigen::MatrixXi::Zero(cfg.pattern->beams(), cfg.pattern->users());
  for (std::size_t j = 0; j < order.size(); ++j) {
    entries.col(static_cast<Eigen::Index>(order[j])) = cfg.pattern->entries().col(static_cast<Eigen::Index>(j));
  }
  return PatternMatrix(std::move(entries));
}

// Single user per beam: gamma = h^2 p.
double oma_rate(const RMatrix& h, const std::vector<std::size_t>& order, double p0, double total_power,
                RMatrix& power) {
  double ladder_total = 0.0;
  for (std::size_t n = 0; n < order.size(); ++n) ladder_total += p0;
  const double scale = total_power / ladder_total;
  double total = 0.0;
  for (std::size_t n = 0; n < order.size(); ++n) {
    const auto beam = static_cast<Eigen::Index>(n);
    const auto user = static_cast<Eigen::Index>(order[n]);
    const double p = p0 * scale;
    const double h2 = h(beam, user) * h(beam, user);
    power(beam, user) = p;
    total += std::log1p(h2 * p) / kLn2;
  }
  return total;
}

// Disjoint user groups per beam, SIC inside each group.
double pnoma_rate(const RMatrix& h, const std::vector<std::size_t>& order, std::size_t beams, double p0, double mu,
                  double total_power, RMatrix& power) {
  std::vector<std::vector<std::size_t>> groups(beams);
  for (std::size_t j = 0; j < order.size(); ++j) groups[j % beams].push_back(order[j]);
  std::vector<std::vector<std::size_t>> chains(beams);
  double ladder_total = 0.0;
  for (std::size_t n = 0; n < beams; ++n) {
    chains[n] = sic_order(h.row(static_cast<Eigen::Index>(n)).transpose(), groups[n]);
    double level = p0;
    for (std::size_t j = 0; j < chains[n].size(); ++j) {
      ladder_total += level;
      level *= mu;
    }
  }
  const double scale = total_power / ladder_total;
  double total = 0.0;
  for (std::size_t n = 0; n < beams; ++n) {
    const auto beam = static_cast<Eigen::Index>(n);
    double level = p0;
    for (const std::size_t k : chains[n]) {
      power(beam, static_cast<Eigen::Index>(k)) = level * scale;
      level *= mu;
    }
    RVector rate = RVector::Zero(h.cols());
    double stronger = 0.0;
    for (auto it = chains[n].rbegin(); it != chains[n].rend(); ++it) {
      const auto k = static_cast<Eigen::Index>(*it);
      const double h2 = h(beam, k) * h(beam, k);
      rate(k) = std::log1p(h2 * power(beam, k) / (1.0 + h2 * stronger)) / kLn2;
      stronger += power(beam, k);
    }
    for (Eigen::Index k = 0; k < h.cols(); ++k) total += rate(k);
  }
  return total;
}

}  // namespace

PointSettings point_settings(const ExperimentConfig& cfg, const SeriesSpec& series, double sweep_value) {
  PointSettings point;
  point.psum_linear = db_to_linear(cfg.sweep == SweepKind::kPsumDb ? sweep_value : cfg.psum_db);
  point.mu = cfg.sweep == SweepKind::kMu ? sweep_value : cfg.mu;
  if (series.mu) point.mu = *series.mu;
  return point;
}

DropOutcome run_drop(const ExperimentConfig& cfg, const SeriesSpec& series, const PointSettings& point,
                     std::uint64_t drop) {
  const RngStream root(cfg.seed, drop);
  const std::size_t users = series.users;
  const std::size_t beams = cfg.beams_of(series);
  const auto placed = drop_users(cfg.cell, users, root.substream(kUserTag));
  std::vector<double> large_scale(users);
  for (std::size_t k = 0; k < users; ++k) {
    RngStream shadow = root.substream(kShadowTag, k);
    large_scale[k] = large_scale_gain(cfg.cell, placed.distances[k], shadow);
  }
  const auto order = weakest_first(large_scale);

  DropOutcome out;
  out.pattern = build_pattern(cfg, series, order);
  out.selected = select_users(out.pattern, large_scale);
  const SelectedUserSet& omega = out.selected;

  const ZfOptions zf{.normalize_beams = cfg.normalize_beams};
  std::vector<ChannelMatrix> channels;
  BeamformerSet beamformer;
  for (;;) {
    const RngStream fading = root.substream(kFadingTag, static_cast<std::uint64_t>(out.redraws));
    channels.clear();
    for (std::size_t k = 0; k < users; ++k) {
      RngStream stream = fading.substream(k);
      channels.push_back(sample_channel(static_cast<Eigen::Index>(cfg.receive_antennas),
                                        static_cast<Eigen::Index>(cfg.transmit_antennas), large_scale[k], stream));
    }
    try {
      beamformer = compute_zfbf(channels, omega, zf);
      break;
    } catch (const SingularChannel&) {
      if (++out.redraws > kMaxRedraws) {
        throw ConfigError("more than " + std::to_string(kMaxRedraws) +
                          " consecutive singular channel draws; check N, N_R and N_T");
      }
    }
  }

  const SupportMask support = out.pattern.support();
  const RMatrix correlation = correlation_matrix(equal_power(out.pattern, point.psum_linear));
  out.gains = equivalent_gains(channels, beamformer, correlation, cfg.cell.noise_variance);
  out.power = RMatrix::Zero(static_cast<Eigen::Index>(beams), static_cast<Eigen::Index>(users));

  if (series.policy == PowerPolicy::kFixedRatio) {
    switch (series.scheme) {
      case Scheme::kOma:
        out.sum_rate = oma_rate(out.gains, order, cfg.p0, point.psum_linear, out.power);
        break;
      case Scheme::kPnoma:
        out.sum_rate = pnoma_rate(out.gains, order, beams, cfg.p0, point.mu, point.psum_linear, out.power);
        break;
      case Scheme::kLsaPdma: {
        const auto chains = sic_orders(out.gains, support);
        const PowerAllocation power = fixed_ratio_power(out.pattern, cfg.p0, point.mu, chains, point.psum_linear);
        out.sum_rate = sum_rate(evaluate_link(out.gains, power, support));
        out.power = power.entries;
        break;
      }
    }
    return out;
  }

  const bool strict = cfg.strict_pattern || series.scheme != Scheme::kLsaPdma;
  const OptProblem problem = OptProblem::make(out.gains, point.psum_linear, cfg.min_rate, omega,
                                              cfg.epsilon * point.psum_linear,
                                              strict ? support : SupportMask{});
  const OptSolution solution = barrier_solve(problem);
  out.status = solution.status;
  if (solution.status == SolveStatus::kInfeasible) {
    out.sum_rate = 0.0;
    return out;
  }
  out.power = solution.power;
  out.sum_rate = solution.objective_value;
  return out;
}

std::pair<double, double> mean_and_stderr(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (const double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  const double n = static_cast<double>(values.size());
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

MonteCarloResult run_monte_carlo(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<double> points = cfg.points();
  const std::size_t n_points = points.size();
  const std::size_t n_series = cfg.series.size();
  const std::size_t drops = cfg.drops;

  MonteCarloResult result;
  result.samples.assign(n_points, std::vector<std::vector<double>>(n_series, std::vector<double>(drops, 0.0)));
  // Per-drop counters, reduced in drop order afterwards.
  std::vector<std::size_t> redraws(drops, 0);
  std::vector<std::size_t> failures(drops, 0);
  std::vector<std::size_t> infeasible(drops, 0);

  std::vector<std::exception_ptr> errors(drops);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t d = next++; d < drops; d = next++) {
      try {
        for (std::size_t p = 0; p < n_points; ++p) {
          for (std::size_t s = 0; s < n_series; ++s) {
            const SeriesSpec& series = cfg.series[s];
            const DropOutcome outcome = run_drop(cfg, series, point_settings(cfg, series, points[p]), d);
            result.samples[p][s][d] = outcome.sum_rate;
            redraws[d] += static_cast<std::size_t>(outcome.redraws);
            if (series.policy == PowerPolicy::kOptimal && outcome.status != SolveStatus::kConverged) {
              if (outcome.status == SolveStatus::kInfeasible) {
                ++infeasible[d];
              } else {
                ++failures[d];
              }
            }
          }
        }
      } catch (...) {
        errors[d] = std::current_exception();
      }
    }
  };

  std::size_t threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, drops);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }

  for (std::size_t d = 0; d < drops; ++d) {
    result.redraws += redraws[d];
    result.solver_failures += failures[d];
    result.infeasible += infeasible[d];
  }
  for (std::size_t p = 0; p < n_points; ++p) {
    for (std::size_t s = 0; s < n_series; ++s) {
      const auto [mean, se] = mean_and_stderr(result.samples[p][s]);
      result.table.rows.push_back(
          ResultRow{points[p], cfg.series[s].label(), cfg.series[s].users, mean, se, drops});
    }
  }
  return result;
}

}  // namespace lsapdma
