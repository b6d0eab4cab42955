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

#ifndef LSAPDMA_CONFIG_HPP
#define LSAPDMA_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lsapdma/channel.hpp"
#include "lsapdma/pattern.hpp"

namespace lsapdma {

enum class Scheme { kOma, kPnoma, kLsaPdma };
enum class PowerPolicy { kFixedRatio, kOptimal };
enum class PatternSource { kSimple, kIdentity, kDiversityOne, kConfigured };
enum class SweepKind { kNone, kPsumDb, kMu };

const char* to_string(Scheme scheme) noexcept;
const char* to_string(PowerPolicy policy) noexcept;
const char* to_string(SweepKind sweep) noexcept;
Scheme parse_scheme(const std::string& text);

/// One curve of an experiment: a scheme at a fixed user count.
struct SeriesSpec {
  Scheme scheme = Scheme::kLsaPdma;
  std::size_t users = 3;
  std::optional<std::size_t> beams;  // overrides ExperimentConfig::beams
  PowerPolicy policy = PowerPolicy::kFixedRatio;
  PatternSource pattern = PatternSource::kSimple;  // lsa-pdma only
  std::optional<double> mu;                        // pins mu against a mu sweep

  /// CSV label: "oma", "pnoma" or "lsa-pdma", "-optimal" appended for the
  /// optimal policy.
  [[nodiscard]] std::string label() const;
};

struct ExperimentConfig {
  CellConfig cell;
  std::size_t transmit_antennas = 16;
  std::size_t receive_antennas = 4;
  std::size_t beams = 3;
  std::vector<SeriesSpec> series;

  double psum_db = 10.0;
  double p0 = 1.0;
  double mu = 2.0;
  double min_rate = 0.0;
  double epsilon = 1e-6;  // per-entry power floor as a fraction of P_sum
  // Baselines and lsa-pdma alike: the optimizer may only use the pattern's
  // support. Off by default for lsa-pdma, always on for oma/pnoma.
  bool strict_pattern = false;
  bool normalize_beams = true;
  std::optional<PatternMatrix> pattern;  // columns in weakest-first order

  SweepKind sweep = SweepKind::kNone;
  std::vector<double> sweep_values;
  std::size_t drops = 1000;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0: hardware concurrency
  std::string output_path = "results";

  [[nodiscard]] std::size_t beams_of(const SeriesSpec& s) const { return s.beams.value_or(beams); }
  /// Sweep points; a single point (the configured P_sum or mu) without a sweep.
  [[nodiscard]] std::vector<double> points() const;
  /// Throws ConfigError on inconsistent settings, InvalidGeometry on a bad cell.
  void validate() const;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// INI-style text: [cell], [system], [power], [experiment] sections of
/// `key = value` lines and an optional [pattern] block of 0/1 rows.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// `series` value syntax, e.g. "lsa-pdma k=7 policy=optimal; oma k=3".
std::vector<SeriesSpec> parse_series(const std::string& text);

}  // namespace lsapdma

#endif  // LSAPDMA_CONFIG_HPP
