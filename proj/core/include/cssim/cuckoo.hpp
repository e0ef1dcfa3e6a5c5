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

// Two-table cuckoo table holding blinded database entries. Every key lives
// in exactly one slot: table 0 at h1(key) or table 1 at h2(key). Clients
// address the published table by position only, so both candidate
// positions are defined for any fingerprint whether or not it was inserted.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cssim/fingerprint.hpp"

namespace cssim {

inline constexpr uint32_t kDefaultMaxKicks = 500;
inline constexpr int kDefaultReseedAttempts = 16;

// A group element published in place of a database fingerprint.
struct BlindedEntry {
  uint64_t element = 0;

  friend bool operator==(const BlindedEntry&, const BlindedEntry&) = default;
};

struct CuckooSeeds {
  uint64_t first = 0;
  uint64_t second = 0;

  friend bool operator==(const CuckooSeeds&, const CuckooSeeds&) = default;
};

struct CuckooParams {
  uint64_t table_size = 0;  // slots per table
  CuckooSeeds seeds;
  uint32_t max_kicks = kDefaultMaxKicks;
  friend bool operator==(const CuckooParams&, const CuckooParams&) = default;
};

// An occupied slot. Filler slots written at publication carry no key.
struct CuckooSlot {
  std::optional<Fingerprint> key;
  BlindedEntry entry;

  friend bool operator==(const CuckooSlot&, const CuckooSlot&) = default;
};

struct KeyedEntry {
  Fingerprint key;
  BlindedEntry entry;
};

using SlotPositions = std::array<uint64_t, 2>;

// h_i(fp) = mix64(fp, seed_i) mod m.
SlotPositions cuckoo_positions(const Fingerprint& fp, const CuckooSeeds& seeds, uint64_t table_size);

class CuckooTable {
 public:
  // Inserts in order: table 0 first, evicted occupants move to their slot
  // in the other table, alternating. Throws DomainError for a duplicate key
  // or table_size < entries.size(), ReseedNeededError after max_kicks
  // evictions for a single insertion.
  static CuckooTable build(std::span<const KeyedEntry> entries, const CuckooParams& params);

  const CuckooParams& params() const { return params_; }
  uint64_t table_size() const { return params_.table_size; }

  SlotPositions positions(const Fingerprint& fp) const {
    return cuckoo_positions(fp, params_.seeds, params_.table_size);
  }
  std::optional<BlindedEntry> lookup(const Fingerprint& fp) const;

  const std::optional<CuckooSlot>& slot(int table, uint64_t index) const;
  // Number of keyed entries.
  std::size_t size() const;

  // Puts an unkeyed entry in every empty slot.
  void fill_empty(const std::function<BlindedEntry(int table, uint64_t index)>& filler);
  // Copy with every key removed: the form handed to clients.
  CuckooTable without_keys() const;

  // FTCT layout, little-endian:
  //   "FTCT" | version u16 | m u64 | seed1 u64 | seed2 u64 | max_kicks u32
  //   then 2*m slots, table 0 first: flags u8 (bit0 occupied, bit1 keyed)
  //   [element u64 if occupied] [fingerprint u64 if keyed]
  std::vector<uint8_t> serialize() const;
  // Throws ParseError on malformed input.
  static CuckooTable deserialize(std::span<const uint8_t> bytes);

  friend bool operator==(const CuckooTable&, const CuckooTable&) = default;

 private:
  CuckooTable() = default;
  explicit CuckooTable(const CuckooParams& params);

  CuckooParams params_;
  std::array<std::vector<std::optional<CuckooSlot>>, 2> tables_;
};

CuckooTable build(std::span<const KeyedEntry> entries, const CuckooParams& params);
SlotPositions positions(const Fingerprint& fp, const CuckooTable& table);
std::optional<BlindedEntry> lookup(const Fingerprint& fp, const CuckooTable& table);

struct ReseedingBuild {
  CuckooTable table;
  int attempts;  // 1 when the first seed pair worked
};

// Seeds for attempt i are derived from base_seed; gives up with
// ReseedNeededError after max_attempts.
ReseedingBuild build_with_reseed(std::span<const KeyedEntry> entries, uint64_t table_size,
                                 uint64_t base_seed, uint32_t max_kicks = kDefaultMaxKicks,
                                 int max_attempts = kDefaultReseedAttempts);

// Slots per table so that entries / (2 * m) <= load.
uint64_t table_size_for_load(std::size_t entries, double load);

}  // namespace cssim
