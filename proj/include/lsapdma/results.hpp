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

#ifndef LSAPDMA_RESULTS_HPP
#define LSAPDMA_RESULTS_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lsapdma/config.hpp"
#include "lsapdma/experiment.hpp"

namespace lsapdma {

/// Build version from `git describe`, or "unknown".
const char* version_string() noexcept;

/// `sweep,scheme,K,mean_sum_rate,stderr,drops`, values with 6 significant digits.
void write_csv(const ResultTable& table, std::ostream& out);

/// Config echo, counters and version as a JSON document.
std::string summary_json(const MonteCarloResult& result, const ExperimentConfig& cfg);

struct EmittedFiles {
  std::filesystem::path csv;
  std::filesystem::path summary;
};

/// Writes `<dir>/results.csv` and `<dir>/summary.json`, creating `dir`.
/// Throws IoError when the directory or files cannot be written and
/// DomainError on an empty table.
EmittedFiles emit_results(const MonteCarloResult& result, const ExperimentConfig& cfg,
                          const std::filesystem::path& dir);

}  // namespace lsapdma

#endif  // LSAPDMA_RESULTS_HPP
