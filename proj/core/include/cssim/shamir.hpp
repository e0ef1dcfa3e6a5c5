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

// Threshold sharing of the per-account associated-data key. Share
// x-coordinates are a per-account counter 1, 2, 3, ... shared between real
// and synthetic shares, so every upload of an account has a distinct x.

#include <cstdint>
#include <set>
#include <span>

#include "cssim/field_math.hpp"
#include "cssim/rng.hpp"

namespace cssim {

inline constexpr int kDefaultThreshold = 10;

struct ShamirShare {
  FieldElement x;
  FieldElement y;

  friend bool operator==(const ShamirShare&, const ShamirShare&) = default;
};

// The secret s (adkey) with its sharing polynomial f, f(0) = s, deg f <= t-1.
// Tracks the x values already handed out. Not safe for concurrent dealing.
class AccountSecret {
 public:
  // Fresh uniform adkey and uniform non-constant coefficients.
  static AccountSecret generate(uint64_t modulus, int threshold, Rng& rng);
  // Uniform non-constant coefficients around a caller-chosen adkey.
  static AccountSecret with_key(const FieldElement& adkey, int threshold, Rng& rng);
  // Fixed polynomial; throws DomainError if deg > threshold - 1.
  AccountSecret(Polynomial sharing_poly, int threshold);

  FieldElement adkey() const { return poly_.coefficient(0); }
  const Polynomial& sharing_poly() const { return poly_; }
  int threshold() const { return threshold_; }
  uint64_t modulus() const { return poly_.modulus(); }

  const std::set<uint64_t>& used_xs() const { return used_; }
  std::set<uint64_t>& used_xs() { return used_; }

 private:
  Polynomial poly_;
  int threshold_;
  std::set<uint64_t> used_;
};

// Real share y = f(x). Throws DomainError for x = 0 (would reveal the key) or
// an x already used by this account.
ShamirShare deal_share(AccountSecret& secret, const FieldElement& x);

// Smallest nonzero x not in used_xs (inserted), with y uniform on the field
// and independent of any polynomial. Throws CapacityError when every nonzero
// point is taken.
ShamirShare deal_synthetic(Rng& rng, std::set<uint64_t>& used_xs, uint64_t modulus);
ShamirShare deal_synthetic(Rng& rng, AccountSecret& secret);

// Smallest nonzero x the account has not used yet.
uint64_t next_unused_x(const std::set<uint64_t>& used_xs, uint64_t modulus);

// Interpolates the first t shares, checks the rest against that polynomial
// and returns its value at 0. Noisy mixtures belong to bw_decode instead.
// Throws InsufficientSharesError (< t shares), DomainError (duplicate x or
// t < 1) and IntegrityError (a later share is off the interpolant).
FieldElement reconstruct(std::span<const ShamirShare> shares, int t);

}  // namespace cssim
