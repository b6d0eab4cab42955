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

#ifndef LSAPDMA_EXPERIMENT_HPP
#define LSAPDMA_EXPERIMENT_HPP

#include <cstdint>
#include <vector>

#include "lsapdma/config.hpp"
#include "lsapdma/optimizer.hpp"

namespace lsapdma {

/// Everything one Monte Carlo drop produced for one series at one point.
struct DropOutcome {
  double sum_rate = 0.0;
  int redraws = 0;  // singular composite channels replaced
  SolveStatus status = SolveStatus::kConverged;  // fixed-ratio drops report converged
  PatternMatrix pattern;
  SelectedUserSet selected;
  RMatrix gains;  // reference h_nk
  RMatrix power;  // P~ actually used
};

/// Settings of a single sweep point.
struct PointSettings {
  double psum_linear = 10.0;
  double mu = 2.0;
};

PointSettings point_settings(const ExperimentConfig& cfg, const SeriesSpec& series, double sweep_value);

/// One end-to-end drop: users, channels, pattern, selected users, ZFBF,
/// MMSE gains, power policy, sum rate. Pure in (cfg, series, point, drop).
/// More than 100 consecutive singular channels raise ConfigError.
DropOutcome run_drop(const ExperimentConfig& cfg, const SeriesSpec& series, const PointSettings& point,
                     std::uint64_t drop);

struct ResultRow {
  double sweep = 0.0;
  std::string scheme;
  std::size_t users = 0;
  double mean_sum_rate = 0.0;
  double std_error = 0.0;
  std::size_t drops = 0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

struct MonteCarloResult {
  ResultTable table;
  // samples[point][series][drop]; rows are point-major, series-minor.
  std::vector<std::vector<std::vector<double>>> samples;
  std::size_t redraws = 0;
  std::size_t solver_failures = 0;  // optimal-policy drops not reaching kConverged
  std::size_t infeasible = 0;       // counted as zero sum rate
};

/// Mean and standard error of the mean (n - 1 denominator; 0 for n = 1),
/// summed in index order.
std::pair<double, double> mean_and_stderr(const std::vector<double>& values);

/// Runs every series at every sweep point over cfg.drops drops. Drop d uses
/// the same user drop and channels for every series and point, so curves
/// are paired. The result does not depend on the thread count.
MonteCarloResult run_monte_carlo(const ExperimentConfig& cfg);

}  // namespace lsapdma

#endif  // LSAPDMA_EXPERIMENT_HPP
