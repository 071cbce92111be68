// Copyright 2026 The wmlab Authors
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

#ifndef WMLAB_HASH_H_
#define WMLAB_HASH_H_

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace wmlab {

inline constexpr uint64_t kFnvOffsetBasis = 14695981039346656037ULL;
inline constexpr uint64_t kFnvPrime = 1099511628211ULL;
inline constexpr uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// 64-bit FNV-1a over the raw bytes of `text`.
constexpr uint64_t Fnv1a64(std::string_view text) {
  uint64_t hash = kFnvOffsetBasis;
  for (char c : text) {
    hash ^= static_cast<uint8_t>(c);
    hash *= kFnvPrime;
  }
  return hash;
}

// One splitmix64 step applied to `x` as the state: add the golden gamma, then
// run the variant-13 finalizer. Mix64(0) is splitmix64's first output for
// seed 0.
constexpr uint64_t Mix64(uint64_t x) {
  x += kGoldenGamma;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic splitmix64 generator. All seeded randomness in the project
// flows through this type so results are reproducible across platforms
// (standard-library distributions are implementation-defined).
class SplitMix64 {
 public:
  using result_type = uint64_t;

  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() { return Next(); }

  uint64_t Next() {
    const uint64_t out = Mix64(state_);
    state_ += kGoldenGamma;
    return out;
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double NextDouble() {
    return static_cast<double>(Next() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). `bound` must be positive.
  uint64_t UniformIndex(uint64_t bound);

  // Uniform integer in [lo, hi].
  int64_t UniformInt(int64_t lo, int64_t hi);

 private:
  uint64_t state_;
};

// Derives an independent child seed from `seed` and a stream label.
constexpr uint64_t DeriveSeed(uint64_t seed, uint64_t label) {
  return Mix64(seed ^ label);
}

constexpr uint64_t DeriveSeed(uint64_t seed, std::string_view label) {
  return Mix64(seed ^ Fnv1a64(label));
}

}  // namespace wmlab

#endif  // WMLAB_HASH_H_
