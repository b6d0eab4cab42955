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

// lsapdma: command-line front end for the simulator and the power optimizer.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lsapdma/config.hpp"
#include "lsapdma/experiment.hpp"
#include "lsapdma/optimizer.hpp"
#include "lsapdma/pattern.hpp"
#include "lsapdma/results.hpp"

namespace {

using namespace lsapdma;

RMatrix read_real_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::vector<double> row;
    std::string word;
    while (fields >> word) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(word, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != word.size()) throw ConfigError("'" + path + "': not a number: '" + word + "'");
      row.push_back(v);
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) throw ShapeError("'" + path + "': ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ShapeError("'" + path + "': no matrix rows");
  RMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

nlohmann::json matrix_json(const RMatrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
    out.push_back(row);
  }
  return out;
}

struct SimulateArgs {
  std::string config;
  std::optional<std::size_t> drops;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheme;
  std::optional<std::string> out;
  std::optional<std::size_t> threads;
  bool verbose = false;
};

int simulate(const SimulateArgs& args) {
  ExperimentConfig cfg = load_config(args.config);
  if (args.drops) cfg.drops = *args.drops;
  if (args.seed) cfg.seed = *args.seed;
  if (args.threads) cfg.threads = *args.threads;
  if (args.out) cfg.output_path = *args.out;
  if (args.scheme) {
    const Scheme keep = parse_scheme(*args.scheme);
    std::erase_if(cfg.series, [&](const SeriesSpec& s) { return s.scheme != keep; });
    if (cfg.series.empty()) throw ConfigError(std::string("config has no ") + to_string(keep) + " series");
  }
  cfg.validate();
  if (args.verbose) {
    std::cerr << "lsapdma " << version_string() << ": " << cfg.series.size() << " series x " << cfg.points().size()
              << " points x " << cfg.drops << " drops\n";
  }
  const MonteCarloResult result = run_monte_carlo(cfg);
  const EmittedFiles files = emit_results(result, cfg, cfg.output_path);
  if (args.verbose) {
    write_csv(result.table, std::cerr);
    std::cerr << "redraws " << result.redraws << ", solver failures " << result.solver_failures << ", infeasible "
              << result.infeasible << "\n";
  }
  std::cout << files.csv.string() << "\n" << files.summary.string() << "\n";
  return 0;
}

struct SolveArgs {
  std::string gains;
  double psum = 0.0;
  double rmin = 0.0;
  double epsilon = 0.0;
  std::vector<std::size_t> selected;
  bool trace = false;
};

int solve(const SolveArgs& args) {
  const RMatrix gains = read_real_matrix(args.gains);
  SelectedUserSet omega;
  if (!args.selected.empty()) {
    if (static_cast<Eigen::Index>(args.selected.size()) != gains.rows()) {
      throw ConfigError("--selected needs one user per beam");
    }
    omega.user_of_beam = args.selected;
  }
  const OptProblem problem = OptProblem::make(gains, args.psum, args.rmin, omega, args.epsilon);
  BarrierParams params;
  if (args.trace) params.trace = &std::cerr;
  const OptSolution solution = barrier_solve(problem, params);
  nlohmann::json out{{"status", to_string(solution.status)},
                     {"sum_rate", solution.objective_value},
                     {"kkt_residual", solution.kkt_residual},
                     {"duality_gap", solution.duality_gap},
                     {"iterations", solution.iterations},
                     {"power", matrix_json(solution.power)}};
  if (solution.min_rate_slack) out["min_rate_slack"] = *solution.min_rate_slack;
  std::cout << out.dump(2) << "\n";
  return solution.status == SolveStatus::kConverged ? 0 : 3;
}

int validate(const std::string& path, bool allow_repeats) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  const PatternMatrix pattern = parse_pattern(in);
  const auto violation = validate_pattern(pattern, PatternChecks{.distinct_columns = !allow_repeats});
  if (violation) {
    std::cout << "invalid: " << violation->message << "\n";
    return 2;
  }
  std::cout << "valid: N=" << pattern.beams() << " K=" << pattern.users()
            << " overload=" << overload_ratio(static_cast<std::size_t>(pattern.beams()),
                                              static_cast<std::size_t>(pattern.users()))
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LSA-PDMA downlink link-level simulator"};
  app.set_version_flag("--version", std::string(lsapdma::version_string()));
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "run a Monte Carlo experiment from a config file");
  sim_cmd->add_option("--config", sim.config, "experiment config")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--drops", sim.drops, "override the number of drops")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.seed, "override the seed");
  sim_cmd->add_option("--scheme", sim.scheme, "only run series of this scheme")
      ->check(CLI::IsMember({"oma", "pnoma", "lsa-pdma"}));
  sim_cmd->add_option("--out", sim.out, "output directory");
  sim_cmd->add_option("--threads", sim.threads, "worker threads (0: all cores)");
  sim_cmd->add_flag("--verbose", sim.verbose, "progress and table on stderr");

  SolveArgs sol;
  auto* solve_cmd = app.add_subcommand("solve", "maximize the sum rate for a fixed gain matrix");
  solve_cmd->add_option("--gains", sol.gains, "N x K matrix of h_nk, one beam per line")
      ->required()
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--psum", sol.psum, "total power, linear")->required()->check(CLI::PositiveNumber);
  solve_cmd->add_option("--rmin", sol.rmin, "per-pair minimum rate, bits/s/Hz")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--epsilon", sol.epsilon, "power floor on the selected pairs")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--selected", sol.selected, "selected user of each beam, zero-based")->delimiter(',');
  solve_cmd->add_flag("--trace", sol.trace, "per-iteration JSON lines on stderr");

  std::string matrix;
  bool allow_repeats = false;
  auto* val_cmd = app.add_subcommand("validate-pattern", "check a 0/1 beam allocation matrix");
  val_cmd->add_option("--matrix", matrix, "row-per-beam 0/1 matrix")->required()->check(CLI::ExistingFile);
  val_cmd->add_flag("--allow-repeated-columns", allow_repeats, "accept diversity-one style repeats");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim_cmd) return simulate(sim);
    if (*solve_cmd) return solve(sol);
    if (*val_cmd) return validate(matrix, allow_repeats);
  } catch (const lsapdma::Error& e) {
    std::cerr << "lsapdma: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
