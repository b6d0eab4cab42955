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

#include "lsapdma/pattern.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>

namespace lsapdma {
namespace {

// Column codes put beam 0 in the most significant of N bits, so numeric order
// equals lexicographic order of the column read top to bottom.
using ColumnCode = std::uint32_t;

constexpr std::size_t kMaxBeams = 20;

bool is_contiguous(ColumnCode code) {
  if (code == 0) return false;
  const ColumnCode run = code >> std::countr_zero(code);
  return (run & (run + 1)) == 0;
}

void check_order(std::span<const std::size_t> order, std::size_t users) {
  if (order.size() != users) throw ShapeError("user order must list every user exactly once");
  std::vector<bool> seen(users, false);
  for (const std::size_t user : order) {
    if (user >= users || seen[user]) throw ShapeError("user order is not a permutation");
    seen[user] = true;
  }
}

void check_dimensions(std::size_t beams, std::size_t users) {
  if (beams == 0 || beams > kMaxBeams) throw InvalidDimension("beam count out of range");
  const std::size_t max_users = (std::size_t{1} << beams) - 1;
  if (users < beams || users > max_users) {
    throw InvalidDimension("user count " + std::to_string(users) + " outside [N, 2^N - 1] = [" +
                           std::to_string(beams) + ", " + std::to_string(max_users) + "]");
  }
}

}  // namespace

PatternMatrix PatternMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) return PatternMatrix{};
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXi m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw ShapeError("ragged pattern rows");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return PatternMatrix(std::move(m));
}

std::vector<std::size_t> PatternMatrix::covered_users(Eigen::Index beam) const {
  std::vector<std::size_t> out;
  for (Eigen::Index k = 0; k < users(); ++k) {
    if (covers(beam, k)) out.push_back(static_cast<std::size_t>(k));
  }
  return out;
}

std::optional<PatternViolation> validate_pattern(const PatternMatrix& pattern, PatternChecks checks) {
  const Eigen::Index n = pattern.beams();
  const Eigen::Index k = pattern.users();
  if (n == 0 || k == 0) return PatternViolation{PatternRule::kEmpty, "empty pattern"};
  if (k < n) {
    return PatternViolation{PatternRule::kTooFewUsers, "K below N (" + std::to_string(k) + " < " +
                                                           std::to_string(n) + ")"};
  }
  if (static_cast<std::size_t>(n) < 63 && static_cast<std::uint64_t>(k) > (std::uint64_t{1} << n) - 1) {
    return PatternViolation{PatternRule::kTooManyUsers,
                            "K exceeds 2^N - 1 (K = " + std::to_string(k) + ", N = " + std::to_string(n) + ")"};
  }
  const auto& b = pattern.entries();
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      if (b(r, c) != 0 && b(r, c) != 1) {
        return PatternViolation{PatternRule::kNonBinary, "non-binary entry at (" + std::to_string(r) + ", " +
                                                             std::to_string(c) + ")"};
      }
    }
  }
  for (Eigen::Index c = 0; c < k; ++c) {
    if (pattern.diversity(c) == 0) {
      return PatternViolation{PatternRule::kUncoveredUser, "uncovered user " + std::to_string(c)};
    }
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    if (pattern.overlap(r) == 0) {
      return PatternViolation{PatternRule::kUnusedBeam, "unused beam " + std::to_string(r)};
    }
  }
  if (checks.distinct_columns) {
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index c = a + 1; c < k; ++c) {
        if (b.col(a) == b.col(c)) {
          return PatternViolation{PatternRule::kDuplicateColumns, "duplicate columns for users " +
                                                                      std::to_string(a) + " and " +
                                                                      std::to_string(c)};
        }
      }
    }
  }
  return std::nullopt;
}

void require_valid_pattern(const PatternMatrix& pattern, PatternChecks checks) {
  if (auto violation = validate_pattern(pattern, checks)) throw InvalidPattern(violation->message);
}

PatternMatrix simple_beam_allocation(std::size_t beams, std::size_t users,
                                     std::span<const std::size_t> weakest_first) {
  check_dimensions(beams, users);
  check_order(weakest_first, users);

  const ColumnCode all_ones = (ColumnCode{1} << beams) - 1;
  std::set<ColumnCode> pool;
  for (ColumnCode c = 1; c <= all_ones; ++c) pool.insert(c);

  std::size_t surplus = static_cast<std::size_t>(all_ones) - users;
  if (surplus % 2 == 1) {
    pool.erase(all_ones);
    --surplus;
  }

  struct Pair {
    ColumnCode lead;
    ColumnCode partner;
    int contiguous;
  };
  std::vector<Pair> pairs;
  for (ColumnCode c = 1; c < all_ones; ++c) {
    const ColumnCode partner = all_ones ^ c;
    const int wc = std::popcount(c);
    const int wp = std::popcount(partner);
    // Visit each pair once, from its heavier (or, on equal weight, larger) member.
    if (wc < wp || (wc == wp && c < partner)) continue;
    pairs.push_back({c, partner, static_cast<int>(is_contiguous(c)) + static_cast<int>(is_contiguous(partner))});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.contiguous != b.contiguous) return a.contiguous < b.contiguous;
    return a.lead < b.lead;
  });
  for (std::size_t i = 0; i < surplus / 2; ++i) {
    pool.erase(pairs[i].lead);
    pool.erase(pairs[i].partner);
  }

  std::vector<ColumnCode> columns(pool.begin(), pool.end());
  std::sort(columns.begin(), columns.end(), [](ColumnCode a, ColumnCode b) {
    const int wa = std::popcount(a);
    const int wb = std::popcount(b);
    if (wa != wb) return wa > wb;
    return a > b;
  });

  Eigen::MatrixXi b = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(beams), static_cast<Eigen::Index>(users));
  for (std::size_t j = 0; j < users; ++j) {
    const auto user = static_cast<Eigen::Index>(weakest_first[j]);
    for (std::size_t row = 0; row < beams; ++row) {
      b(static_cast<Eigen::Index>(row), user) = static_cast<int>((columns[j] >> (beams - 1 - row)) & 1u);
    }
  }
  return PatternMatrix(std::move(b));
}

PatternMatrix identity_pattern(std::size_t beams, std::span<const std::size_t> weakest_first) {
  return diversity_one_pattern(beams, beams, weakest_first);
}

PatternMatrix diversity_one_pattern(std::size_t beams, std::size_t users,
                                    std::span<const std::size_t> weakest_first) {
  if (beams == 0 || users < beams) throw InvalidDimension("diversity-one pattern needs K >= N >= 1");
  check_order(weakest_first, users);
  Eigen::MatrixXi b = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(beams), static_cast<Eigen::Index>(users));
  for (std::size_t j = 0; j < users; ++j) {
    b(static_cast<Eigen::Index>(j % beams), static_cast<Eigen::Index>(weakest_first[j])) = 1;
  }
  return PatternMatrix(std::move(b));
}

PatternMatrix parse_pattern(std::istream& in) {
  std::vector<std::vector<int>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<int> row;
    std::string token;
    while (fields >> token) {
      if (token != "0" && token != "1") throw ShapeError("pattern entries must be 0 or 1, got '" + token + "'");
      row.push_back(token == "1" ? 1 : 0);
    }
    if (row.empty()) {
      if (rows.empty()) continue;
      break;
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw ShapeError("ragged pattern rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ShapeError("no pattern rows found");
  return PatternMatrix::from_rows(rows);
}

PatternMatrix parse_pattern(const std::string& text) {
  std::istringstream in(text);
  return parse_pattern(in);
}

std::string format_pattern(const PatternMatrix& pattern) {
  std::ostringstream out;
  for (Eigen::Index r = 0; r < pattern.beams(); ++r) {
    for (Eigen::Index c = 0; c < pattern.users(); ++c) {
      if (c > 0) out << ' ';
      out << pattern.entries()(r, c);
    }
    out << '\n';
  }
  return out.str();
}

PowerAllocation fixed_ratio_power(const PatternMatrix& pattern, double p0, double mu,
                                  const std::vector<std::vector<std::size_t>>& sic_orders,
                                  double total_power) {
  if (!(p0 > 0.0) || !(mu > 0.0)) throw DomainError("p0 and mu must be positive");
  if (!(total_power > 0.0)) throw DomainError("total power must be positive");
  const Eigen::Index n_beams = pattern.beams();
  if (static_cast<Eigen::Index>(sic_orders.size()) != n_beams) throw ShapeError("one SIC order per beam required");

  RMatrix p = RMatrix::Zero(n_beams, pattern.users());
  double ladder_total = 0.0;  // accumulated beam by beam, in SIC order
  for (Eigen::Index n = 0; n < n_beams; ++n) {
    const auto& order = sic_orders[static_cast<std::size_t>(n)];
    if (pattern.overlap(n) == 0) throw InvalidPattern("beam " + std::to_string(n) + " covers no user");
    if (static_cast<int>(order.size()) != pattern.overlap(n)) {
      throw ShapeError("SIC order of beam " + std::to_string(n) + " must list exactly its covered users");
    }
    double level = p0;
    for (const std::size_t user : order) {
      const auto k = static_cast<Eigen::Index>(user);
      if (k >= pattern.users() || !pattern.covers(n, k) || p(n, k) != 0.0) {
        throw ShapeError("SIC order of beam " + std::to_string(n) + " lists an uncovered or repeated user");
      }
      p(n, k) = level;
      ladder_total += level;
      level *= mu;
    }
  }
  p *= total_power / ladder_total;
  return PowerAllocation{std::move(p)};
}

PowerAllocation equal_power(const PatternMatrix& pattern, double total_power) {
  const auto ones = pattern.ones();
  if (ones == 0) throw InvalidPattern("pattern has no ones");
  return PowerAllocation{pattern.entries().cast<double>() * (total_power / static_cast<double>(ones))};
}

CVector superpose(const PowerAllocation& power, const CVector& symbols) {
  if (symbols.size() != power.entries.cols()) throw ShapeError("symbol vector length must equal K");
  const RMatrix amplitude = power.entries.cwiseSqrt();
  return amplitude.cast<Complex>() * symbols;
}

double overload_ratio(std::size_t beams, std::size_t users) {
  if (beams == 0) throw InvalidDimension("beam count must be positive");
  return static_cast<double>(users) / static_cast<double>(beams);
}

RMatrix correlation_matrix(const PowerAllocation& power) {
  const RMatrix amplitude = power.entries.cwiseSqrt();
  return amplitude * amplitude.transpose();
}

}  // namespace lsapdma
