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
#include <random>

namespace cssim {

// Seeded generator with platform-independent draws. std::mt19937_64 output is
// fixed by the standard, but the <random> distributions are not, so the
// bounded and real-valued draws are done here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform on [0, bound). bound must be nonzero.
  uint64_t uniform(uint64_t bound) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

  // Uniform on [lo, hi], inclusive.
  uint64_t uniform_in(uint64_t lo, uint64_t hi) {
    return lo + uniform(hi - lo + 1);
  }

  // Uniform on [0, 1) with 53 bits of precision.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent child seed; used to give every account, image and
// attack its own stream so results do not depend on processing order.
uint64_t derive_seed(uint64_t seed, uint64_t stream);

}  // namespace cssim
