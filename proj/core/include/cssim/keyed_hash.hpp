// Copyright 2026 The cssim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>

namespace cssim {

// Odd multipliers of the keyed mix. Changing either constant changes every
// frozen test vector (cuckoo positions, voucher bytes, golden dumps).
inline constexpr uint64_t kMixMul1 = 0xff51afd7ed558ccdULL;
inline constexpr uint64_t kMixMul2 = 0xc4ceb9fe1a85ec53ULL;

constexpr uint64_t fold64(uint64_t z) {
  z ^= z >> 33;
  z *= kMixMul1;
  z ^= z >> 29;
  z *= kMixMul2;
  z ^= z >> 32;
  return z;
}

// Keyed 64-bit mix: seed XOR, two multiply/xorshift rounds, then the seed is
// added back before a second fold so that mix64(k, s) is not a function of
// k ^ s alone. Not a cryptographic PRF.
constexpr uint64_t mix64(uint64_t key, uint64_t seed) {
  return fold64(fold64(key ^ seed) + seed);
}

struct Digest128 {
  uint64_t lo = 0;
  uint64_t hi = 0;

  friend bool operator==(const Digest128&, const Digest128&) = default;
};

// Two-lane chained mix over a word sequence, length-terminated.
Digest128 digest(std::span<const uint64_t> words);
Digest128 digest(std::initializer_list<uint64_t> words);

}  // namespace cssim
