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

#ifndef LSAPDMA_PATTERN_HPP
#define LSAPDMA_PATTERN_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lsapdma/common.hpp"

namespace lsapdma {

/// Binary beam allocation matrix B (beams x users). B(n, k) = 1 when beam n
/// carries user k. Construction does not validate; see validate_pattern.
class PatternMatrix {
 public:
  PatternMatrix() = default;
  explicit PatternMatrix(Eigen::MatrixXi entries) : entries_(std::move(entries)) {}

  static PatternMatrix from_rows(const std::vector<std::vector<int>>& rows);

  [[nodiscard]] Eigen::Index beams() const noexcept { return entries_.rows(); }
  [[nodiscard]] Eigen::Index users() const noexcept { return entries_.cols(); }
  [[nodiscard]] bool covers(Eigen::Index beam, Eigen::Index user) const { return entries_(beam, user) != 0; }
  /// Column weight: number of beams carrying the user.
  [[nodiscard]] int diversity(Eigen::Index user) const { return entries_.col(user).sum(); }
  /// Row weight: number of users sharing the beam.
  [[nodiscard]] int overlap(Eigen::Index beam) const { return entries_.row(beam).sum(); }
  [[nodiscard]] std::vector<std::size_t> covered_users(Eigen::Index beam) const;
  [[nodiscard]] SupportMask support() const { return entries_.array() != 0; }
  [[nodiscard]] Eigen::Index ones() const { return entries_.count(); }
  [[nodiscard]] const Eigen::MatrixXi& entries() const noexcept { return entries_; }

  friend bool operator==(const PatternMatrix& a, const PatternMatrix& b) {
    return a.entries_.rows() == b.entries_.rows() && a.entries_.cols() == b.entries_.cols() &&
           a.entries_ == b.entries_;
  }

 private:
  Eigen::MatrixXi entries_;
};

enum class PatternRule {
  kEmpty,
  kTooFewUsers,
  kTooManyUsers,
  kNonBinary,
  kUncoveredUser,
  kUnusedBeam,
  kDuplicateColumns,
};

struct PatternViolation {
  PatternRule rule;
  std::string message;
};

struct PatternChecks {
  // Diversity-one (power-domain NOMA) patterns repeat columns by construction.
  bool distinct_columns = true;
};

/// First violated invariant, or nullopt when B is a valid pattern.
std::optional<PatternViolation> validate_pattern(const PatternMatrix& pattern, PatternChecks checks = {});

/// Throws InvalidPattern carrying the violation message.
void require_valid_pattern(const PatternMatrix& pattern, PatternChecks checks = {});

/// Simple beam allocation for K users over N beams.
///
/// Starts from all 2^N - 1 nonzero columns (every beam then carries exactly
/// 2^(N-1) users) and drops the surplus while keeping beam loads equal:
/// complementary column pairs are removed first, non-contiguous pairs before
/// contiguous ones, and the all-ones column goes when an odd count must be
/// dropped. The survivors are handed out in descending diversity
/// (lexicographically largest column first) following `weakest_first`,
/// so the weakest user gets the widest coverage. N = 3, K = 5 yields
///   [1 1 0 1 0; 1 1 1 0 0; 1 0 1 0 1].
PatternMatrix simple_beam_allocation(std::size_t beams, std::size_t users,
                                     std::span<const std::size_t> weakest_first);

/// OMA pattern: K = N, user weakest_first[n] alone on beam n.
PatternMatrix identity_pattern(std::size_t beams, std::span<const std::size_t> weakest_first);

/// Power-domain NOMA pattern: every user on exactly one beam, assigned
/// round-robin in weakest-first order (beam n gets positions n, n + N, ...).
PatternMatrix diversity_one_pattern(std::size_t beams, std::size_t users,
                                    std::span<const std::size_t> weakest_first);

/// Row-per-line, whitespace-separated 0/1 entries. Reading stops at the first
/// blank line or end of stream.
PatternMatrix parse_pattern(std::istream& in);
PatternMatrix parse_pattern(const std::string& text);
std::string format_pattern(const PatternMatrix& pattern);

/// Merged pattern/power matrix P~ with P~(n, k) = b_nk * p_nk (linear power).
struct PowerAllocation {
  RMatrix entries;

  [[nodiscard]] double total() const { return entries.sum(); }
  [[nodiscard]] SupportMask support() const { return entries.array() > 0.0; }
};

/// Fixed-ratio policy: inside beam n the covered users, taken in ascending
/// gain order sic_orders[n], get p0, mu p0, mu^2 p0, ...; the whole matrix is
/// then rescaled once so the total equals total_power.
PowerAllocation fixed_ratio_power(const PatternMatrix& pattern, double p0, double mu,
                                  const std::vector<std::vector<std::size_t>>& sic_orders,
                                  double total_power);

/// Equal split of total_power over the ones of the pattern.
PowerAllocation equal_power(const PatternMatrix& pattern, double total_power);

/// t = (B o P^(1/2)) s.
CVector superpose(const PowerAllocation& power, const CVector& symbols);

double overload_ratio(std::size_t beams, std::size_t users);

/// A = E{t t^H} for unit-variance independent symbols:
/// A_ij = sum_k sqrt(P~_ik P~_jk).
RMatrix correlation_matrix(const PowerAllocation& power);

}  // namespace lsapdma

#endif  // LSAPDMA_PATTERN_HPP
