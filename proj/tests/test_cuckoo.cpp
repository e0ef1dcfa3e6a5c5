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

#include <set>

#include "cssim/cuckoo.hpp"
#include "cssim/error.hpp"
#include "cssim/rng.hpp"

namespace cssim {
namespace {

std::vector<KeyedEntry> random_entries(Rng& rng, std::size_t n) {
  std::set<uint64_t> seen;
  std::vector<KeyedEntry> out;
  while (out.size() < n) {
    const uint64_t k = rng.next_u64();
    if (seen.insert(k).second) out.push_back({Fingerprint{k}, BlindedEntry{k ^ 0x5555}});
  }
  return out;
}

// Every inserted key sits in exactly one of its two candidate slots and
// every occupied slot holds an inserted key at one of its positions.
void expect_one_slot_invariant(const CuckooTable& t, const std::vector<KeyedEntry>& entries) {
  std::size_t occupied = 0;
  for (int table = 0; table < 2; ++table) {
    for (uint64_t i = 0; i < t.table_size(); ++i) occupied += t.slot(table, i).has_value();
  }
  ASSERT_EQ(occupied, entries.size());
  for (const auto& e : entries) {
    const auto pos = t.positions(e.key);
    const auto& a = t.slot(0, pos[0]);
    const auto& b = t.slot(1, pos[1]);
    const bool in_a = a && a->key == e.key;
    const bool in_b = b && b->key == e.key;
    ASSERT_TRUE(in_a != in_b) << e.key.to_hex();
    ASSERT_EQ(in_a ? a->entry : b->entry, e.entry);
  }
}

TEST(Cuckoo, PositionsVector) {
  const auto pos = cuckoo_positions(Fingerprint{0}, CuckooSeeds{1, 2}, 64);
  EXPECT_EQ(pos[0], 3u);
  EXPECT_EQ(pos[1], 59u);
}

TEST(Cuckoo, PositionsPureAndDegenerate) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const Fingerprint fp{rng.next_u64()};
    EXPECT_EQ(cuckoo_positions(fp, {7, 8}, 1000), cuckoo_positions(fp, {7, 8}, 1000));
    EXPECT_EQ(cuckoo_positions(fp, {7, 8}, 1), (SlotPositions{0, 0}));
  }
  EXPECT_THROW(cuckoo_positions(Fingerprint{1}, {1, 2}, 0), DomainError);
}

TEST(Cuckoo, EmptyAndSingle) {
  const CuckooTable empty = CuckooTable::build({}, {8, {1, 2}, kDefaultMaxKicks});
  EXPECT_EQ(empty.size(), 0u);
  for (int t = 0; t < 2; ++t) {
    for (uint64_t i = 0; i < 8; ++i) EXPECT_FALSE(empty.slot(t, i).has_value());
  }
  EXPECT_FALSE(empty.lookup(Fingerprint{5}).has_value());

  const std::vector<KeyedEntry> one = {{Fingerprint{42}, BlindedEntry{7}}};
  const CuckooTable t = CuckooTable::build(one, {8, {1, 2}, kDefaultMaxKicks});
  const auto pos = t.positions(Fingerprint{42});
  ASSERT_TRUE(t.slot(0, pos[0]).has_value());
  EXPECT_EQ(t.slot(0, pos[0])->key, Fingerprint{42});
  EXPECT_EQ(t.lookup(Fingerprint{42}), BlindedEntry{7});
}

TEST(Cuckoo, PreconditionErrors) {
  const std::vector<KeyedEntry> dup = {{Fingerprint{1}, {1}}, {Fingerprint{1}, {2}}};
  EXPECT_THROW(CuckooTable::build(dup, {8, {1, 2}, kDefaultMaxKicks}), DomainError);
  const std::vector<KeyedEntry> three = {{Fingerprint{1}, {1}}, {Fingerprint{2}, {2}}, {Fingerprint{3}, {3}}};
  EXPECT_THROW(CuckooTable::build(three, {2, {1, 2}, kDefaultMaxKicks}), DomainError);
}

TEST(Cuckoo, ForcedCycleNeedsReseed) {
  // Three keys whose both positions are 0 in a 3-slot table: two slots for
  // three keys, so insertion must cycle.
  const CuckooSeeds seeds{1, 2};
  std::vector<KeyedEntry> keys;
  for (uint64_t k = 0; keys.size() < 3; ++k) {
    if (cuckoo_positions(Fingerprint{k}, seeds, 3) == SlotPositions{0, 0}) {
      keys.push_back({Fingerprint{k}, BlindedEntry{k}});
    }
  }
  EXPECT_THROW(CuckooTable::build(keys, {3, seeds, kDefaultMaxKicks}), ReseedNeededError);
  // Two such keys still fit.
  EXPECT_NO_THROW(CuckooTable::build(std::span(keys).first(2), {3, seeds, kDefaultMaxKicks}));
}

TEST(Cuckoo, OneSlotInvariantAndLookups) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = rng.uniform_in(1, 2000);
    const auto entries = random_entries(rng, n);
    const auto build = build_with_reseed(entries, table_size_for_load(n, 0.45), rng.next_u64());
    expect_one_slot_invariant(build.table, entries);
    for (const auto& e : entries) ASSERT_EQ(build.table.lookup(e.key), e.entry);
  }
}

TEST(Cuckoo, NoFalseLookups) {
  Rng rng(3);
  const auto entries = random_entries(rng, 5000);
  const auto table = build_with_reseed(entries, 5000, 11).table;  // half full
  std::set<uint64_t> inserted;
  for (const auto& e : entries) inserted.insert(e.key.bits);
  int checked = 0;
  while (checked < 10'000) {
    const uint64_t k = rng.next_u64();
    if (inserted.contains(k)) continue;
    ASSERT_FALSE(table.lookup(Fingerprint{k}).has_value());
    ++checked;
  }
}

TEST(Cuckoo, TableSizeForLoad) {
  EXPECT_EQ(table_size_for_load(10'000, 0.49), 10'205u);
  EXPECT_EQ(table_size_for_load(10'000, 0.5), 10'000u);
  EXPECT_EQ(table_size_for_load(0, 0.45), 1u);
  for (std::size_t n : {1u, 7u, 100u, 9999u}) {
    const uint64_t m = table_size_for_load(n, 0.45);
    EXPECT_LE(static_cast<double>(n) / (2.0 * m), 0.45);
    EXPECT_GT(static_cast<double>(n) / (2.0 * (m - 1)), 0.45 - 1e-12);
  }
}

TEST(Cuckoo, ReseedBuildsAtHighLoad) {
  Rng rng(4);
  int ok = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto entries = random_entries(rng, 10'000);
    try {
      const auto b = build_with_reseed(entries, table_size_for_load(entries.size(), 0.49), rng.next_u64(),
                                       kDefaultMaxKicks, 1);
      expect_one_slot_invariant(b.table, entries);
      ++ok;
    } catch (const ReseedNeededError&) {
    }
  }
  EXPECT_GE(ok, 9);
}

TEST(Cuckoo, FillAndStrip) {
  Rng rng(5);
  const auto entries = random_entries(rng, 50);
  CuckooTable t = build_with_reseed(entries, 64, 3).table;
  t.fill_empty([](int table, uint64_t i) { return BlindedEntry{1000 + 100 * table + i}; });
  for (int table = 0; table < 2; ++table) {
    for (uint64_t i = 0; i < 64; ++i) ASSERT_TRUE(t.slot(table, i).has_value());
  }
  EXPECT_EQ(t.size(), 50u);
  const CuckooTable pub = t.without_keys();
  EXPECT_EQ(pub.size(), 0u);
  for (int table = 0; table < 2; ++table) {
    for (uint64_t i = 0; i < 64; ++i) {
      ASSERT_FALSE(pub.slot(table, i)->key.has_value());
      ASSERT_EQ(pub.slot(table, i)->entry, t.slot(table, i)->entry);
    }
  }
}

TEST(Cuckoo, SerializationRoundTrip) {
  Rng rng(6);
  const auto entries = random_entries(rng, 30);
  CuckooTable t = build_with_reseed(entries, 40, 9).table;
  EXPECT_EQ(CuckooTable::deserialize(t.serialize()), t);
  t.fill_empty([](int, uint64_t i) { return BlindedEntry{i}; });
  EXPECT_EQ(CuckooTable::deserialize(t.serialize()), t);
  const CuckooTable pub = t.without_keys();
  const auto bytes = pub.serialize();
  EXPECT_EQ(CuckooTable::deserialize(bytes), pub);
  // Header 4 + 2 + 8 + 8 + 8 + 4, then 80 slots of flag + element.
  EXPECT_EQ(bytes.size(), 34u + 80u * 9u);

  for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{20}, bytes.size() - 1}) {
    EXPECT_THROW(CuckooTable::deserialize(std::span(bytes).first(cut)), ParseError) << cut;
  }
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(CuckooTable::deserialize(bad_magic), ParseError);
  auto trailing = bytes;
  trailing.push_back(0);
  EXPECT_THROW(CuckooTable::deserialize(trailing), ParseError);
  auto bad_flags = bytes;
  bad_flags[34] = 0x80;
  EXPECT_THROW(CuckooTable::deserialize(bad_flags), ParseError);
}

}  // namespace
}  // namespace cssim
