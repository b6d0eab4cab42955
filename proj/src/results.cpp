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

#include "lsapdma/results.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#ifndef LSAPDMA_VERSION
#define LSAPDMA_VERSION "unknown"
#endif

namespace lsapdma {
namespace {

std::string sig6(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json series = nlohmann::json::array();
  for (const SeriesSpec& s : cfg.series) {
    nlohmann::json item{{"scheme", to_string(s.scheme)},
                        {"label", s.label()},
                        {"K", s.users},
                        {"N", cfg.beams_of(s)},
                        {"policy", to_string(s.policy)}};
    if (s.mu) item["mu"] = *s.mu;
    series.push_back(std::move(item));
  }
  nlohmann::json out{
      {"cell",
       {{"radius_m", cfg.cell.radius_m},
        {"min_distance_m", cfg.cell.min_distance_m},
        {"path_loss_factor", cfg.cell.path_loss_factor},
        {"path_loss_exponent", cfg.cell.path_loss_exponent},
        {"reference_distance_m", cfg.cell.reference_distance_m},
        {"shadow_std_db", cfg.cell.shadow_std_db},
        {"noise_variance", cfg.cell.noise_variance}}},
      {"system",
       {{"transmit_antennas", cfg.transmit_antennas},
        {"receive_antennas", cfg.receive_antennas},
        {"beams", cfg.beams}}},
      {"power",
       {{"psum_db", cfg.psum_db},
        {"p0", cfg.p0},
        {"mu", cfg.mu},
        {"min_rate", cfg.min_rate},
        {"epsilon", cfg.epsilon},
        {"strict_pattern", cfg.strict_pattern},
        {"normalize_beams", cfg.normalize_beams}}},
      {"experiment",
       {{"series", series},
        {"sweep", to_string(cfg.sweep)},
        {"values", cfg.sweep_values},
        {"drops", cfg.drops},
        {"seed", cfg.seed},
        {"threads", cfg.threads},
        {"output", cfg.output_path}}}};
  if (cfg.pattern) out["pattern"] = format_pattern(*cfg.pattern);
  return out;
}

}  // namespace

const char* version_string() noexcept { return LSAPDMA_VERSION; }

void write_csv(const ResultTable& table, std::ostream& out) {
  out << "sweep,scheme,K,mean_sum_rate,stderr,drops\n";
  for (const ResultRow& row : table.rows) {
    out << sig6(row.sweep) << ',' << row.scheme << ',' << row.users << ',' << sig6(row.mean_sum_rate) << ','
        << sig6(row.std_error) << ',' << row.drops << '\n';
  }
}

std::string summary_json(const MonteCarloResult& result, const ExperimentConfig& cfg) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ResultRow& row : result.table.rows) {
    rows.push_back({{"sweep", row.sweep},
                    {"scheme", row.scheme},
                    {"K", row.users},
                    {"mean_sum_rate", row.mean_sum_rate},
                    {"stderr", row.std_error},
                    {"drops", row.drops}});
  }
  const nlohmann::json doc{{"version", version_string()},
                           {"config", config_json(cfg)},
                           {"counters",
                            {{"singular_redraws", result.redraws},
                             {"solver_failures", result.solver_failures},
                             {"infeasible_drops", result.infeasible}}},
                           {"rows", rows}};
  return doc.dump(2) + "\n";
}

EmittedFiles emit_results(const MonteCarloResult& result, const ExperimentConfig& cfg,
                          const std::filesystem::path& dir) {
  if (result.table.rows.empty()) throw DomainError("result table is empty");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  EmittedFiles files{dir / "results.csv", dir / "summary.json"};
  std::ofstream csv(files.csv);
  if (!csv) throw IoError("cannot write '" + files.csv.string() + "'");
  write_csv(result.table, csv);
  std::ofstream summary(files.summary);
  if (!summary) throw IoError("cannot write '" + files.summary.string() + "'");
  summary << summary_json(result, cfg);
  if (!csv.flush() || !summary.flush()) throw IoError("write to '" + dir.string() + "' failed");
  return files;
}

}  // namespace lsapdma
