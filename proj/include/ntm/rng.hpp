// Copyright 2026 The NTM Authors. All Rights Reserved.
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

#ifndef NTM_RNG_HPP_
#define NTM_RNG_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

namespace ntm {

// Counter-based generator: the i-th draw is a pure function of (key, i), so
// streams reproduce bit-for-bit on every platform. Mixing is SplitMix64.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Unbiased integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Derives an independent sub-stream seed from a user seed and a stream name
// such as "init/X" or "shuffle".
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream);

// Fisher-Yates permutation of 0..n-1.
std::vector<std::uint32_t> shuffled_indices(std::size_t n, CounterRng& rng);

}  // namespace ntm

#endif  // NTM_RNG_HPP_
