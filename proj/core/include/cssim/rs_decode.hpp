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

// Threshold reveal over a mixture of real and synthetic shares: the real
// shares are evaluations of one polynomial of degree < t, the synthetic ones
// are random noise. Berlekamp-Welch recovers the polynomial when
// n >= t + 2e; brute_force_decode is the independent subset-enumeration
// oracle used to check it.

#include <cstdint>
#include <optional>
#include <vector>

#include "cssim/field_math.hpp"
#include "cssim/shamir.hpp"

namespace cssim {

inline constexpr std::size_t kBruteForceMaxShares = 14;

struct NoisyShareSet {
  std::vector<ShamirShare> shares;  // distinct x
  int t = 0;                        // degree bound + 1
  int e_max = 0;                    // largest noise count to try
};

enum class DecodeStatus { kRecovered, kUndecodable };

struct DecodeResult {
  DecodeStatus status = DecodeStatus::kUndecodable;
  std::optional<Polynomial> poly;
  std::vector<uint64_t> inlier_xs;  // ascending; shares that lie on poly

  bool recovered() const { return status == DecodeStatus::kRecovered; }
  friend bool operator==(const DecodeResult&, const DecodeResult&) = default;
};

// Largest noise count a set of n shares at threshold t can absorb.
inline int decoding_radius(std::size_t n, int t) {
  return n < static_cast<std::size_t>(t) ? -1 : static_cast<int>((n - t) / 2);
}

// For e = 0..e_max ascending: find monic E (deg e) and Q (deg <= e + t - 1)
// with Q(x_i) = y_i E(x_i) for every share, divide Q by E exactly and accept
// the quotient if it has degree < t and fits at least max(t, n - e) shares.
// Throws DomainError on duplicate x, t < 1 or e_max < 0.
DecodeResult bw_decode(const NoisyShareSet& s);

// Interpolates every t-subset and keeps the polynomials of maximal support;
// a unique maximum covering at least n - e_max shares is recovered, anything
// else is undecodable. Throws CapacityError above kBruteForceMaxShares shares.
DecodeResult brute_force_decode(const NoisyShareSet& s);

}  // namespace cssim
