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

#include "cssim/keyed_hash.hpp"

#include "cssim/rng.hpp"

namespace cssim {
namespace {

constexpr uint64_t kLaneA = 0x6a09e667f3bcc908ULL;
constexpr uint64_t kLaneB = 0xbb67ae8584caa73bULL;
constexpr uint64_t kStreamSeed = 0x3c6ef372fe94f82bULL;

}  // namespace

Digest128 digest(std::span<const uint64_t> words) {
  uint64_t a = kLaneA;
  uint64_t b = kLaneB;
  for (const uint64_t w : words) {
    a = mix64(a ^ w, kLaneA);
    b = mix64(b + w, kLaneB);
  }
  const uint64_t n = words.size();
  return {mix64(a ^ n, kLaneB), mix64(b ^ n, kLaneA)};
}

Digest128 digest(std::initializer_list<uint64_t> words) {
  return digest(std::span<const uint64_t>(words.begin(), words.size()));
}

uint64_t derive_seed(uint64_t seed, uint64_t stream) {
  return mix64(stream, mix64(seed, kStreamSeed));
}

}  // namespace cssim
