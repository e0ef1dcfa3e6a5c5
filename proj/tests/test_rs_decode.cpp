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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "cssim/error.hpp"
#include "cssim/rng.hpp"
#include "cssim/rs_decode.hpp"

namespace cssim {
namespace {

ShamirShare sh(uint64_t x, uint64_t y, uint64_t p) { return {FieldElement(x, p), FieldElement(y, p)}; }

Polynomial random_poly(Rng& rng, int t, uint64_t p) {
  std::vector<FieldElement> c;
  for (int i = 0; i < t; ++i) c.emplace_back(rng.uniform(p), p);
  return Polynomial(std::move(c), p);
}

struct Instance {
  NoisyShareSet set;
  Polynomial truth;
  std::set<uint64_t> noisy_xs;
};

// n distinct x, the first e shuffled positions get a y that misses the truth.
Instance random_instance(Rng& rng, uint64_t p, int t, int n, int e) {
  Polynomial f = random_poly(rng, t, p);
  std::vector<uint64_t> xs(p - 1);
  for (uint64_t i = 0; i < p - 1; ++i) xs[i] = i + 1;
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) std::swap(xs[i], xs[i + rng.uniform(xs.size() - i)]);
  Instance inst{{{}, t, decoding_radius(n, t)}, f, {}};
  for (int i = 0; i < n; ++i) {
    const FieldElement x(xs[i], p);
    FieldElement y = f(x);
    if (i < e) {
      y = y + FieldElement(1 + rng.uniform(p - 1), p);
      inst.noisy_xs.insert(xs[i]);
    }
    inst.set.shares.push_back({x, y});
  }
  return inst;
}

std::size_t support_size(const Polynomial& f, const std::vector<ShamirShare>& shares) {
  return std::count_if(shares.begin(), shares.end(), [&](const ShamirShare& s) { return f(s.x) == s.y; });
}

TEST(RsDecode, NoiselessIsInterpolation) {
  constexpr uint64_t p = 97;
  Rng rng(1);
  for (int t = 1; t <= 5; ++t) {
    const Instance inst = random_instance(rng, p, t, t, 0);
    std::vector<Point> pts;
    for (const auto& s : inst.set.shares) pts.push_back({s.x, s.y});
    const DecodeResult r = bw_decode(inst.set);
    ASSERT_TRUE(r.recovered());
    EXPECT_EQ(*r.poly, lagrange_interpolate(pts));
    EXPECT_EQ(r.inlier_xs.size(), static_cast<std::size_t>(t));
    EXPECT_EQ(brute_force_decode(inst.set), r);
  }
}

TEST(RsDecode, SingleNoisePointP17) {
  constexpr uint64_t p = 17;
  const NoisyShareSet s{{sh(1, 8, p), sh(2, 11, p), sh(3, 14, p), sh(4, 1, p)}, 2, 1};
  const DecodeResult r = bw_decode(s);
  ASSERT_TRUE(r.recovered());
  EXPECT_EQ(*r.poly, Polynomial::from_values({5, 3}, p));
  EXPECT_EQ(r.inlier_xs, (std::vector<uint64_t>{1, 2, 3}));
  EXPECT_EQ(brute_force_decode(s), r);
}

TEST(RsDecode, PointOnTheLineIsNotNoise) {
  constexpr uint64_t p = 17;
  // 5 + 3*4 = 17 = 0, so (4, 0) is consistent.
  const NoisyShareSet s{{sh(1, 8, p), sh(2, 11, p), sh(3, 14, p), sh(4, 0, p)}, 2, 1};
  const DecodeResult r = bw_decode(s);
  ASSERT_TRUE(r.recovered());
  EXPECT_EQ(r.inlier_xs, (std::vector<uint64_t>{1, 2, 3, 4}));
}

TEST(RsDecode, TooFewShares) {
  constexpr uint64_t p = 17;
  const NoisyShareSet s{{sh(1, 8, p), sh(2, 11, p)}, 3, 0};
  EXPECT_FALSE(bw_decode(s).recovered());
  EXPECT_FALSE(brute_force_decode(s).recovered());
  EXPECT_EQ(decoding_radius(2, 3), -1);
}

TEST(RsDecode, AmbiguousSplitP17) {
  constexpr uint64_t p = 17;
  // (1,1),(2,2) lie on y = x; (3,5),(4,6) on y = x + 2. Every other line
  // through two of them fits exactly two points as well.
  const NoisyShareSet s{{sh(1, 1, p), sh(2, 2, p), sh(3, 5, p), sh(4, 6, p)}, 2, 1};
  EXPECT_FALSE(brute_force_decode(s).recovered());
  EXPECT_FALSE(bw_decode(s).recovered());
}

TEST(RsDecode, Errors) {
  constexpr uint64_t p = 17;
  EXPECT_THROW(bw_decode({{sh(1, 1, p), sh(1, 2, p)}, 1, 0}), DomainError);
  EXPECT_THROW(brute_force_decode({{sh(1, 1, p), sh(1, 2, p)}, 1, 0}), DomainError);
  NoisyShareSet big{{}, 2, 1};
  for (uint64_t x = 1; x <= kBruteForceMaxShares + 1; ++x) big.shares.push_back(sh(x, x, p));
  EXPECT_THROW(brute_force_decode(big), CapacityError);
  EXPECT_NO_THROW(bw_decode(big));
  EXPECT_THROW(bw_decode({{sh(1, 1, p)}, 0, 0}), DomainError);
}

TEST(RsDecode, OracleEquivalence) {
  Rng rng(2);
  int instances = 0;
  for (uint64_t p : {17ULL, 97ULL}) {
    for (int seed = 0; seed < 300; ++seed) {
      const int t = 1 + static_cast<int>(rng.uniform(4));
      const int n = t + static_cast<int>(rng.uniform(13 - t));
      const int e = static_cast<int>(rng.uniform(decoding_radius(n, t) + 1));
      const Instance inst = random_instance(rng, p, t, n, e);
      const DecodeResult bw = bw_decode(inst.set);
      const DecodeResult bf = brute_force_decode(inst.set);
      ASSERT_EQ(bw.status, bf.status) << "p=" << p << " t=" << t << " n=" << n << " e=" << e;
      ASSERT_TRUE(bw.recovered());
      ASSERT_EQ(*bw.poly, inst.truth);
      ASSERT_EQ(bw, bf);
      for (uint64_t x : bw.inlier_xs) ASSERT_FALSE(inst.noisy_xs.contains(x));
      ++instances;
    }
  }
  EXPECT_GE(instances, 500);
}

TEST(RsDecode, BeyondRadiusNeverWrong) {
  Rng rng(3);
  int recovered = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const uint64_t p = trial % 2 ? 17 : 97;
    const int t = 1 + static_cast<int>(rng.uniform(4));
    const int n = t + 2 + static_cast<int>(rng.uniform(11 - t));
    const int e = decoding_radius(n, t) + 1;
    // Adversarial: the noise points all sit on one other polynomial.
    Instance inst = random_instance(rng, p, t, n, 0);
    const Polynomial decoy = random_poly(rng, t, p);
    for (int i = 0; i < e; ++i) inst.set.shares[i].y = decoy(inst.set.shares[i].x);
    for (int e_max : {e - 1, e}) {
      inst.set.e_max = e_max;
      const DecodeResult r = bw_decode(inst.set);
      if (!r.recovered()) continue;
      ++recovered;
      const std::size_t sup = support_size(*r.poly, inst.set.shares);
      ASSERT_EQ(sup, r.inlier_xs.size());
      ASSERT_GE(sup + static_cast<std::size_t>(e_max), static_cast<std::size_t>(n));
      ASSERT_GE(sup, support_size(inst.truth, inst.set.shares));
      ASSERT_GE(sup, support_size(decoy, inst.set.shares));
      if (n <= static_cast<int>(kBruteForceMaxShares)) {
        const DecodeResult bf = brute_force_decode(inst.set);
        if (bf.recovered()) {
          ASSERT_EQ(*bf.poly, *r.poly);
        }
      }
    }
  }
  EXPECT_GT(recovered, 0);
}

TEST(RsDecode, SecretIsConstantTerm) {
  constexpr uint64_t p = kPrime61;
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int t = 3 + static_cast<int>(rng.uniform(8));
    AccountSecret secret = AccountSecret::generate(p, t, rng);
    NoisyShareSet s{{}, t, 0};
    for (int i = 0; i < t + 6; ++i) s.shares.push_back(deal_share(secret, FieldElement(next_unused_x(secret.used_xs(), p), p)));
    for (int i = 0; i < 3; ++i) s.shares.push_back(deal_synthetic(rng, secret));
    s.e_max = decoding_radius(s.shares.size(), t);
    const DecodeResult r = bw_decode(s);
    ASSERT_TRUE(r.recovered());
    ASSERT_EQ(r.poly->coefficient(0), secret.adkey());
    ASSERT_EQ(r.inlier_xs.size(), static_cast<std::size_t>(t + 6));
  }
}

}  // namespace
}  // namespace cssim
