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

#include "cssim/rs_decode.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "cssim/error.hpp"

namespace cssim {

namespace {

uint64_t validate(const NoisyShareSet& s) {
  if (s.t < 1) throw DomainError("threshold must be at least 1");
  if (s.e_max < 0) throw DomainError("e_max must be non-negative");
  if (s.shares.empty()) return 0;
  const uint64_t p = s.shares.front().x.modulus();
  for (std::size_t i = 0; i < s.shares.size(); ++i) {
    if (s.shares[i].x.modulus() != p || s.shares[i].y.modulus() != p) {
      throw DomainError("shares from different fields");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (s.shares[i].x == s.shares[j].x) throw DomainError("duplicate share index in decode");
    }
  }
  return p;
}

std::vector<uint64_t> support(const Polynomial& f, const std::vector<ShamirShare>& shares) {
  std::vector<uint64_t> xs;
  for (const auto& sh : shares) {
    if (f(sh.x) == sh.y) xs.push_back(sh.x.value());
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

}  // namespace

DecodeResult bw_decode(const NoisyShareSet& s) {
  const uint64_t p = validate(s);
  const std::size_t n = s.shares.size();
  if (n < static_cast<std::size_t>(s.t)) return {};

  for (int e = 0; e <= s.e_max; ++e) {
    const std::size_t q_terms = static_cast<std::size_t>(e + s.t);
    const std::size_t unknowns = q_terms + static_cast<std::size_t>(e);
    FieldMatrix a(n, unknowns, p);
    std::vector<FieldElement> b(n, FieldElement::zero(p));
    for (std::size_t i = 0; i < n; ++i) {
      const FieldElement& x = s.shares[i].x;
      const FieldElement& y = s.shares[i].y;
      FieldElement xp = FieldElement::one(p);
      for (std::size_t k = 0; k < q_terms; ++k) {
        a.at(i, k) = xp;
        if (k < static_cast<std::size_t>(e)) a.at(i, q_terms + k) = -(y * xp);
        if (k == static_cast<std::size_t>(e)) b[i] = y * xp;
        xp *= x;
      }
    }
    const LinearSolution sol = solve_linear_system(a, b);
    if (!sol.solvable()) continue;

    std::vector<FieldElement> q_coeffs(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(q_terms));
    std::vector<FieldElement> e_coeffs(sol.x.begin() + static_cast<std::ptrdiff_t>(q_terms), sol.x.end());
    e_coeffs.push_back(FieldElement::one(p));
    const auto division = poly_divmod(Polynomial(std::move(q_coeffs), p), Polynomial(std::move(e_coeffs), p));
    if (!division.remainder.is_zero() || division.quotient.degree() >= s.t) continue;

    auto inliers = support(division.quotient, s.shares);
    const std::size_t needed = std::max<std::size_t>(static_cast<std::size_t>(s.t), n - static_cast<std::size_t>(e));
    if (inliers.size() < needed) continue;
    return {DecodeStatus::kRecovered, division.quotient, std::move(inliers)};
  }
  return {};
}

DecodeResult brute_force_decode(const NoisyShareSet& s) {
  validate(s);
  const std::size_t n = s.shares.size();
  if (n > kBruteForceMaxShares) {
    throw CapacityError("brute-force decode is limited to " + std::to_string(kBruteForceMaxShares) +
                        " shares");
  }
  const std::size_t t = static_cast<std::size_t>(s.t);
  if (n < t) return {};

  // Distinct candidate polynomials keyed by coefficient values.
  std::map<std::vector<uint64_t>, std::pair<Polynomial, std::vector<uint64_t>>> candidates;
  std::vector<std::size_t> idx(t);
  for (std::size_t i = 0; i < t; ++i) idx[i] = i;
  std::vector<Point> pts(t);
  while (true) {
    for (std::size_t i = 0; i < t; ++i) pts[i] = {s.shares[idx[i]].x, s.shares[idx[i]].y};
    Polynomial f = lagrange_interpolate(pts);
    std::vector<uint64_t> key;
    for (const auto& c : f.coefficients()) key.push_back(c.value());
    if (!candidates.contains(key)) {
      auto sup = support(f, s.shares);
      candidates.emplace(std::move(key), std::make_pair(std::move(f), std::move(sup)));
    }
    // Next combination in lexicographic order.
    std::size_t i = t;
    while (i > 0 && idx[i - 1] == n - t + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < t; ++j) idx[j] = idx[j - 1] + 1;
  }

  std::size_t best = 0;
  int best_count = 0;
  const std::pair<Polynomial, std::vector<uint64_t>>* winner = nullptr;
  for (const auto& [key, cand] : candidates) {
    const std::size_t sz = cand.second.size();
    if (sz > best) {
      best = sz;
      best_count = 1;
      winner = &cand;
    } else if (sz == best) {
      ++best_count;
    }
  }
  const std::size_t e_max = static_cast<std::size_t>(s.e_max);
  if (winner == nullptr || best_count != 1 || best + e_max < n) return {};
  return {DecodeStatus::kRecovered, winner->first, winner->second};
}

}  // namespace cssim
