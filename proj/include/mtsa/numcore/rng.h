// Copyright 2026 The mtsa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MTSA_NUMCORE_RNG_H_
#define MTSA_NUMCORE_RNG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace mtsa {

// xoshiro256** seeded through SplitMix64. Everything here is defined on
// 64-bit integers, so a seed yields the same stream on every platform and
// standard library (unlike std::mt19937 + std::uniform_*_distribution).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t NextU64();
  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t Below(std::uint64_t bound);
  // Standard normal (Box-Muller, no cached second value).
  double Normal();

  // Fisher-Yates shuffle.
  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // Independent generator derived from this one's seed and `stream`;
  // does not advance *this.
  SeededRng Fork(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_;
};

std::uint64_t SplitMix64(std::uint64_t& state);

}  // namespace mtsa

#endif  // MTSA_NUMCORE_RNG_H_
