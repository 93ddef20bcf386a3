// Copyright 2026 The PartialGC Authors. All Rights Reserved.
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

#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace pgc {

/// splitmix64 finaliser applied to (seed, stream). Used to derive independent
/// child seeds: per-trial seeds from the master seed, per-purpose streams
/// (failures, speeds, R) from a trial seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// mt19937_64 with distribution code that is fixed here rather than left to
/// the standard library, so that a seed produces the same numbers with any
/// toolchain.
///
///  - uniform01:   top 53 bits of one draw, in [0, 1)
///  - normal:      basic Box-Muller, both variates used (the second is cached)
///  - exponential: -log(1 - u) / rate
///  - below(n):    Lemire multiply-shift with rejection, unbiased
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform01();
  double normal();
  double exponential(double rate);
  std::uint64_t below(std::uint64_t n);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace pgc
