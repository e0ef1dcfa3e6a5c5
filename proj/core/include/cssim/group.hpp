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

// Prime-order subgroup of Z_q^* for a safe prime q = 2r + 1. Desk-scale
// parameters only: even the largest profile offers no real security.

#include <cstdint>
#include <string>

#include "cssim/fingerprint.hpp"
#include "cssim/rng.hpp"

namespace cssim {

class Group {
 public:
  // Validates q = 2r + 1 with q and r prime, and that g generates the order-r
  // subgroup. Throws DomainError otherwise.
  Group(uint64_t modulus, uint64_t order, uint64_t generator, std::string name);

  // q = 23, r = 11: small enough to enumerate every exponent.
  static Group tiny();
  // 31-bit safe prime; collisions in hash_to_group are rare but observable.
  static Group test();
  // 63-bit safe prime used by simulations.
  static Group run();
  // "tiny23" | "test31" | "run63"; throws DomainError for anything else.
  static Group by_name(const std::string& name);

  uint64_t modulus() const { return modulus_; }
  uint64_t order() const { return order_; }
  uint64_t generator() const { return generator_; }
  const std::string& name() const { return name_; }

  uint64_t mul(uint64_t a, uint64_t b) const;
  uint64_t exp(uint64_t base, uint64_t e) const;
  uint64_t exp_g(uint64_t e) const { return exp(generator_, e); }
  // Membership in the order-r subgroup: 1 <= x < q and x^r = 1.
  bool contains(uint64_t x) const;
  // Uniform on [1, r).
  uint64_t random_exponent(Rng& rng) const;

  // g^(1 + mix64(fp) mod (r - 1)). The discrete log is public, which is
  // acceptable for a simulator and nothing more.
  uint64_t hash_to_group(const Fingerprint& fp) const;

  friend bool operator==(const Group& a, const Group& b) {
    return a.modulus_ == b.modulus_ && a.order_ == b.order_ && a.generator_ == b.generator_;
  }

 private:
  uint64_t modulus_;
  uint64_t order_;
  uint64_t generator_;
  std::string name_;
};

}  // namespace cssim
