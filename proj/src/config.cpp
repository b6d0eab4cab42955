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

#include "lsapdma/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

namespace lsapdma {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
  return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("'" + key + "' expects a nonnegative integer, got '" + value + "'");
  }
  try {
    return std::stoull(value);
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' is out of range");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  const std::string v = lower(value);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError("'" + key + "' expects a boolean, got '" + value + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(value);
  while (in >> item) {
    if (!item.empty() && item.back() == ',') item.pop_back();
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

SweepKind parse_sweep(const std::string& value) {
  const std::string v = lower(value);
  if (v == "none") return SweepKind::kNone;
  if (v == "psum_db") return SweepKind::kPsumDb;
  if (v == "mu") return SweepKind::kMu;
  throw ConfigError("unknown sweep '" + value + "' (none, psum_db, mu)");
}

SeriesSpec parse_one_series(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  if (!(in >> word)) throw ConfigError("empty series entry");
  SeriesSpec spec;
  spec.scheme = parse_scheme(word);
  bool have_users = false;
  while (in >> word) {
    const auto eq = word.find('=');
    if (eq == std::string::npos) throw ConfigError("series option '" + word + "' is not key=value");
    const std::string key = lower(word.substr(0, eq));
    const std::string value = word.substr(eq + 1);
    if (key == "k") {
      spec.users = static_cast<std::size_t>(to_unsigned(key, value));
      have_users = true;
    } else if (key == "n") {
      spec.beams = static_cast<std::size_t>(to_unsigned(key, value));
    } else if (key == "mu") {
      spec.mu = to_double(key, value);
    } else if (key == "policy") {
      const std::string v = lower(value);
      if (v == "simple" || v == "fixed-ratio") {
        spec.policy = PowerPolicy::kFixedRatio;
      } else if (v == "optimal") {
        spec.policy = PowerPolicy::kOptimal;
      } else {
        throw ConfigError("unknown policy '" + value + "' (simple, optimal)");
      }
    } else if (key == "pattern") {
      const std::string v = lower(value);
      if (v == "simple") {
        spec.pattern = PatternSource::kSimple;
      } else if (v == "identity") {
        spec.pattern = PatternSource::kIdentity;
      } else if (v == "diversity-one") {
        spec.pattern = PatternSource::kDiversityOne;
      } else if (v == "config") {
        spec.pattern = PatternSource::kConfigured;
      } else {
        throw ConfigError("unknown pattern source '" + value + "'");
      }
    } else {
      throw ConfigError("unknown series option '" + key + "'");
    }
  }
  if (!have_users) throw ConfigError("series '" + trim(text) + "' needs k=<users>");
  return spec;
}

}  // namespace

const char* to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::kOma:
      return "oma";
    case Scheme::kPnoma:
      return "pnoma";
    case Scheme::kLsaPdma:
      return "lsa-pdma";
  }
  return "unknown";
}

const char* to_string(PowerPolicy policy) noexcept {
  return policy == PowerPolicy::kOptimal ? "optimal" : "fixed-ratio";
}

const char* to_string(SweepKind sweep) noexcept {
  switch (sweep) {
    case SweepKind::kNone:
      return "none";
    case SweepKind::kPsumDb:
      return "psum_db";
    case SweepKind::kMu:
      return "mu";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& text) {
  const std::string v = lower(text);
  if (v == "oma") return Scheme::kOma;
  if (v == "pnoma") return Scheme::kPnoma;
  if (v == "lsa-pdma") return Scheme::kLsaPdma;
  throw ConfigError("unknown scheme '" + text + "' (oma, pnoma, lsa-pdma)");
}

std::string SeriesSpec::label() const {
  std::string out = to_string(scheme);
  if (policy == PowerPolicy::kOptimal) out += "-optimal";
  return out;
}

std::vector<SeriesSpec> parse_series(const std::string& text) {
  std::vector<SeriesSpec> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ';')) {
    if (!trim(item).empty()) out.push_back(parse_one_series(item));
  }
  return out;
}

std::vector<double> ExperimentConfig::points() const {
  switch (sweep) {
    case SweepKind::kPsumDb:
    case SweepKind::kMu:
      return sweep_values;
    case SweepKind::kNone:
      break;
  }
  return {psum_db};
}

void ExperimentConfig::validate() const {
  cell.validate();
  if (series.empty()) throw ConfigError("no series configured");
  if (drops < 1) throw ConfigError("drops must be at least 1");
  if (receive_antennas < 1) throw ConfigError("N_R must be at least 1");
  if (!(p0 > 0.0) || !(mu > 0.0)) throw ConfigError("p0 and mu must be positive");
  if (!(min_rate >= 0.0)) throw ConfigError("min_rate must be nonnegative");
  if (!(epsilon >= 0.0) || epsilon >= 1.0) throw ConfigError("epsilon must lie in [0, 1)");
  if (sweep != SweepKind::kNone && sweep_values.empty()) throw ConfigError("sweep needs at least one value");
  if (sweep == SweepKind::kMu) {
    for (const double v : sweep_values) {
      if (!(v > 0.0)) throw ConfigError("mu sweep values must be positive");
    }
  }
  for (const SeriesSpec& s : series) {
    const std::size_t n = beams_of(s);
    const std::string name = s.label() + " k=" + std::to_string(s.users);
    if (n < 1 || n > 16) throw ConfigError(name + ": N must lie in [1, 16]");
    if (transmit_antennas < n) throw ConfigError(name + ": N_T must be at least N");
    if (n * receive_antennas > transmit_antennas) {
      throw ConfigError(name + ": zero-forcing needs N * N_R <= N_T");
    }
    if (s.mu && !(*s.mu > 0.0)) throw ConfigError(name + ": mu must be positive");
    switch (s.scheme) {
      case Scheme::kOma:
        if (s.users != n) throw ConfigError(name + ": oma needs K = N");
        break;
      case Scheme::kPnoma:
        if (s.users < n) throw ConfigError(name + ": pnoma needs K >= N");
        break;
      case Scheme::kLsaPdma:
        if (s.users < n || s.users > (std::size_t{1} << n) - 1) {
          throw ConfigError(name + ": lsa-pdma needs N <= K <= 2^N - 1");
        }
        if (s.pattern == PatternSource::kIdentity && s.users != n) {
          throw ConfigError(name + ": identity pattern needs K = N");
        }
        if (s.pattern == PatternSource::kConfigured) {
          if (!pattern) throw ConfigError(name + ": pattern=config without a [pattern] block");
          if (static_cast<std::size_t>(pattern->beams()) != n ||
              static_cast<std::size_t>(pattern->users()) != s.users) {
            throw ConfigError(name + ": [pattern] block has the wrong shape");
          }
        }
        break;
    }
    const bool strict = strict_pattern || s.scheme != Scheme::kLsaPdma;
    if (s.policy == PowerPolicy::kOptimal && strict && min_rate > 0.0) {
      throw ConfigError(name + ": min_rate > 0 cannot be combined with a pattern-restricted optimizer");
    }
  }
  if (pattern) {
    const PatternChecks relaxed{.distinct_columns = false};
    if (const auto bad = validate_pattern(*pattern, relaxed)) throw ConfigError("[pattern]: " + bad->message);
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string section;
  std::string line;
  std::string pattern_text;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = lower(trim(body.substr(1, body.size() - 2)));
      if (section != "cell" && section != "system" && section != "power" && section != "experiment" &&
          section != "pattern") {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      }
      continue;
    }
    if (section == "pattern") {
      pattern_text += body + "\n";
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = lower(trim(body.substr(0, eq)));
    const std::string value = trim(body.substr(eq + 1));
    const std::string where = section + "." + key;
    bool known = true;
    if (section == "cell") {
      if (key == "radius_m") cfg.cell.radius_m = to_double(where, value);
      else if (key == "min_distance_m") cfg.cell.min_distance_m = to_double(where, value);
      else if (key == "path_loss_factor") cfg.cell.path_loss_factor = to_double(where, value);
      else if (key == "path_loss_exponent") cfg.cell.path_loss_exponent = to_double(where, value);
      else if (key == "reference_distance_m") cfg.cell.reference_distance_m = to_double(where, value);
      else if (key == "shadow_std_db") cfg.cell.shadow_std_db = to_double(where, value);
      else if (key == "noise_variance") cfg.cell.noise_variance = to_double(where, value);
      else known = false;
    } else if (section == "system") {
      if (key == "transmit_antennas") cfg.transmit_antennas = to_unsigned(where, value);
      else if (key == "receive_antennas") cfg.receive_antennas = to_unsigned(where, value);
      else if (key == "beams") cfg.beams = to_unsigned(where, value);
      else known = false;
    } else if (section == "power") {
      if (key == "psum_db") cfg.psum_db = to_double(where, value);
      else if (key == "p0") cfg.p0 = to_double(where, value);
      else if (key == "mu") cfg.mu = to_double(where, value);
      else if (key == "min_rate") cfg.min_rate = to_double(where, value);
      else if (key == "epsilon") cfg.epsilon = to_double(where, value);
      else if (key == "strict_pattern") cfg.strict_pattern = to_bool(where, value);
      else if (key == "normalize_beams") cfg.normalize_beams = to_bool(where, value);
      else known = false;
    } else if (section == "experiment") {
      if (key == "series") cfg.series = parse_series(value);
      else if (key == "sweep") cfg.sweep = parse_sweep(value);
      else if (key == "values") cfg.sweep_values = to_list(where, value);
      else if (key == "drops") cfg.drops = to_unsigned(where, value);
      else if (key == "seed") cfg.seed = to_unsigned(where, value);
      else if (key == "threads") cfg.threads = to_unsigned(where, value);
      else if (key == "output") cfg.output_path = value;
      else known = false;
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
    }
    if (!known) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + where + "'");
  }
  if (!pattern_text.empty()) {
    try {
      cfg.pattern = parse_pattern(pattern_text);
    } catch (const Error& e) {
      throw ConfigError(std::string("[pattern]: ") + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  return parse_config(in);
}

}  // namespace lsapdma
