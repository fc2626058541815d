// Copyright 2026 The SDCC Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SDCC_RANDOM_H_
#define SDCC_RANDOM_H_

#include <cstddef>
#include <cstdint>

namespace sdcc {

// Portable deterministic randomness. The standard distributions are
// implementation-defined, so everything seeded in the toolkit goes through
// these helpers to stay bit-identical across standard libraries.

constexpr std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Maps 64 random bits to [0, 1) with 53 bits of precision.
constexpr double UnitInterval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t NextU64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return SplitMix64(state_);
  }

  double Uniform() { return UnitInterval(NextU64()); }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Unbiased integer in [0, n). n must be positive.
  std::size_t UniformIndex(std::size_t n);

  // Standard normal via Box-Muller (one value per call, no caching).
  double Normal();

 private:
  std::uint64_t state_;
};

}  // namespace sdcc

#endif  // SDCC_RANDOM_H_
