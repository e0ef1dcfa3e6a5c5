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

#include "cssim/group.hpp"

#include <utility>

#include "cssim/error.hpp"
#include "cssim/field_math.hpp"
#include "cssim/keyed_hash.hpp"

namespace cssim {

namespace {

constexpr uint64_t kHashToGroupSeed = 0x48324721b1d5e0f3ULL;

}  // namespace

Group::Group(uint64_t modulus, uint64_t order, uint64_t generator, std::string name)
    : modulus_(modulus), order_(order), generator_(generator), name_(std::move(name)) {
  if (order < 3 || modulus != 2 * order + 1 || !is_prime(order) || !is_prime(modulus)) {
    throw DomainError("group modulus must be a safe prime 2r + 1");
  }
  if (generator <= 1 || generator >= modulus || pow_mod(generator, order, modulus) != 1) {
    throw DomainError("generator does not generate the order-r subgroup");
  }
}

Group Group::tiny() { return Group(23, 11, 4, "tiny23"); }

Group Group::test() { return Group(2147483579ULL, 1073741789ULL, 4, "test31"); }

Group Group::run() {
  return Group(9223372036854771239ULL, 4611686018427385619ULL, 4, "run63");
}

Group Group::by_name(const std::string& name) {
  if (name == "tiny23") return tiny();
  if (name == "test31") return test();
  if (name == "run63") return run();
  throw DomainError("unknown group profile '" + name + "'");
}

uint64_t Group::mul(uint64_t a, uint64_t b) const { return mul_mod(a, b, modulus_); }

uint64_t Group::exp(uint64_t base, uint64_t e) const { return pow_mod(base, e, modulus_); }

bool Group::contains(uint64_t x) const {
  return x >= 1 && x < modulus_ && pow_mod(x, order_, modulus_) == 1;
}

uint64_t Group::random_exponent(Rng& rng) const { return rng.uniform_in(1, order_ - 1); }

uint64_t Group::hash_to_group(const Fingerprint& fp) const {
  return exp_g(1 + mix64(fp.bits, kHashToGroupSeed) % (order_ - 1));
}

}  // namespace cssim
