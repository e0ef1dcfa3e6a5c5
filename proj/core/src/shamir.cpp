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

#include "cssim/shamir.hpp"

#include <string>
#include <utility>
#include <vector>

#include "cssim/error.hpp"

namespace cssim {

namespace {

Polynomial random_poly(const FieldElement& constant, int threshold, Rng& rng) {
  if (threshold < 1) throw DomainError("threshold must be at least 1");
  const uint64_t p = constant.modulus();
  std::vector<FieldElement> coeffs{constant};
  for (int i = 1; i < threshold; ++i) coeffs.emplace_back(rng.uniform(p), p);
  return Polynomial(std::move(coeffs), p);
}

}  // namespace

AccountSecret AccountSecret::generate(uint64_t modulus, int threshold, Rng& rng) {
  const FieldElement adkey(rng.uniform(modulus), modulus);
  return AccountSecret(random_poly(adkey, threshold, rng), threshold);
}

AccountSecret AccountSecret::with_key(const FieldElement& adkey, int threshold, Rng& rng) {
  return AccountSecret(random_poly(adkey, threshold, rng), threshold);
}

AccountSecret::AccountSecret(Polynomial sharing_poly, int threshold)
    : poly_(std::move(sharing_poly)), threshold_(threshold) {
  if (threshold < 1) throw DomainError("threshold must be at least 1");
  if (poly_.degree() > threshold - 1) {
    throw DomainError("sharing polynomial degree exceeds threshold - 1");
  }
}

ShamirShare deal_share(AccountSecret& secret, const FieldElement& x) {
  if (x.modulus() != secret.modulus()) throw DomainError("share index from a different field");
  if (x.is_zero()) throw DomainError("x = 0 would hand out the secret itself");
  if (!secret.used_xs().insert(x.value()).second) {
    throw DomainError("share index " + std::to_string(x.value()) + " already used");
  }
  return {x, secret.sharing_poly()(x)};
}

uint64_t next_unused_x(const std::set<uint64_t>& used_xs, uint64_t modulus) {
  uint64_t x = 1;
  const auto first = used_xs.lower_bound(1);
  const std::size_t nonzero = used_xs.size() - (used_xs.contains(0) ? 1 : 0);
  if (first != used_xs.end() && *first == 1 && *used_xs.rbegin() == nonzero) {
    // 1..n all taken.
    x = nonzero + 1;
  } else {
    for (auto it = first; it != used_xs.end() && *it == x; ++it) ++x;
  }
  if (x >= modulus) throw CapacityError("no unused nonzero share index left in the field");
  return x;
}

ShamirShare deal_synthetic(Rng& rng, std::set<uint64_t>& used_xs, uint64_t modulus) {
  const uint64_t x = next_unused_x(used_xs, modulus);
  used_xs.insert(x);
  return {FieldElement(x, modulus), FieldElement(rng.uniform(modulus), modulus)};
}

ShamirShare deal_synthetic(Rng& rng, AccountSecret& secret) {
  return deal_synthetic(rng, secret.used_xs(), secret.modulus());
}

FieldElement reconstruct(std::span<const ShamirShare> shares, int t) {
  if (t < 1) throw DomainError("threshold must be at least 1");
  if (shares.size() < static_cast<std::size_t>(t)) {
    throw InsufficientSharesError("need " + std::to_string(t) + " shares, have " +
                                  std::to_string(shares.size()));
  }
  for (std::size_t i = 0; i < shares.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (shares[i].x == shares[j].x) throw DomainError("duplicate share index");
    }
  }
  std::vector<Point> head;
  head.reserve(t);
  for (int i = 0; i < t; ++i) head.push_back({shares[i].x, shares[i].y});
  const Polynomial f = lagrange_interpolate(head);
  for (std::size_t i = t; i < shares.size(); ++i) {
    if (f(shares[i].x) != shares[i].y) {
      throw IntegrityError("share at x = " + std::to_string(shares[i].x.value()) +
                           " is inconsistent with the first t shares");
    }
  }
  return f(FieldElement::zero(f.modulus()));
}

}  // namespace cssim
