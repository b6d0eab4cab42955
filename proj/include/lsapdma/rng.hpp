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

#ifndef LSAPDMA_RNG_HPP
#define LSAPDMA_RNG_HPP

#include <array>
#include <cstdint>
#include <optional>

#include "lsapdma/common.hpp"

namespace lsapdma {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key) noexcept;

/// A named random stream. The seed is the Philox key, the 64-bit stream id
/// occupies the upper counter half and the draw index the lower half, so
/// streams never overlap and any stream can be split further by tag.
///
/// Every stochastic operation in the library takes one of these explicitly.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  /// Independent child stream; deterministic in (seed, stream, tag).
  [[nodiscard]] RngStream substream(std::uint64_t tag) const noexcept;
  [[nodiscard]] RngStream substream(std::uint64_t tag, std::uint64_t index) const noexcept {
    return substream(tag).substream(index);
  }

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;
  /// Standard normal via Box-Muller.
  double normal() noexcept;
  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  Complex complex_normal(double variance) noexcept;

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t index_ = 0;
  PhiloxCounter buffer_{};
  std::size_t pos_ = 4;
  std::optional<double> spare_normal_;
};

}  // namespace lsapdma

#endif  // LSAPDMA_RNG_HPP
