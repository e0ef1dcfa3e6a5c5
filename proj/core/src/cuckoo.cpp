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

#include "cssim/cuckoo.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "cssim/byte_io.hpp"
#include "cssim/error.hpp"
#include "cssim/keyed_hash.hpp"

namespace cssim {

namespace {

constexpr std::string_view kTableMagic = "FTCT";
constexpr uint16_t kTableVersion = 1;
constexpr uint8_t kSlotOccupied = 0x1;
constexpr uint8_t kSlotKeyed = 0x2;
constexpr uint64_t kReseedStream = 0x9e3779b97f4a7c15ULL;

}  // namespace

SlotPositions cuckoo_positions(const Fingerprint& fp, const CuckooSeeds& seeds, uint64_t table_size) {
  if (table_size == 0) throw DomainError("cuckoo table size must be positive");
  return {mix64(fp.bits, seeds.first) % table_size, mix64(fp.bits, seeds.second) % table_size};
}

CuckooTable::CuckooTable(const CuckooParams& params) : params_(params) {
  if (params.table_size == 0) throw DomainError("cuckoo table size must be positive");
  for (auto& t : tables_) t.assign(params.table_size, std::nullopt);
}

CuckooTable CuckooTable::build(std::span<const KeyedEntry> entries, const CuckooParams& params) {
  if (params.table_size < entries.size()) {
    throw DomainError("table size " + std::to_string(params.table_size) + " is below entry count " +
                      std::to_string(entries.size()));
  }
  CuckooTable table(params);
  std::set<uint64_t> seen;
  for (const auto& e : entries) {
    if (!seen.insert(e.key.bits).second) {
      throw DomainError("duplicate fingerprint " + e.key.to_hex() + " in cuckoo build");
    }
  }

  for (const auto& e : entries) {
    std::optional<CuckooSlot> carried = CuckooSlot{e.key, e.entry};
    int t = 0;
    for (uint32_t kicks = 0;; ++kicks) {
      const uint64_t idx = table.positions(*carried->key)[t];
      auto& slot = table.tables_[t][idx];
      if (!slot) {
        slot = std::move(carried);
        break;
      }
      if (kicks == params.max_kicks) {
        throw ReseedNeededError("eviction bound of " + std::to_string(params.max_kicks) +
                                " reached; rebuild with fresh seeds");
      }
      std::swap(slot, carried);
      t ^= 1;
    }
  }
  return table;
}

std::optional<BlindedEntry> CuckooTable::lookup(const Fingerprint& fp) const {
  const auto pos = positions(fp);
  for (int t = 0; t < 2; ++t) {
    const auto& slot = tables_[t][pos[t]];
    if (slot && slot->key && *slot->key == fp) return slot->entry;
  }
  return std::nullopt;
}

const std::optional<CuckooSlot>& CuckooTable::slot(int table, uint64_t index) const {
  if (table < 0 || table > 1 || index >= params_.table_size) {
    throw DomainError("cuckoo slot address out of range");
  }
  return tables_[table][index];
}

std::size_t CuckooTable::size() const {
  std::size_t n = 0;
  for (const auto& t : tables_) {
    for (const auto& s : t) n += (s && s->key) ? 1 : 0;
  }
  return n;
}

void CuckooTable::fill_empty(const std::function<BlindedEntry(int, uint64_t)>& filler) {
  for (int t = 0; t < 2; ++t) {
    for (uint64_t i = 0; i < params_.table_size; ++i) {
      auto& s = tables_[t][i];
      if (!s) s = CuckooSlot{std::nullopt, filler(t, i)};
    }
  }
}

CuckooTable CuckooTable::without_keys() const {
  CuckooTable out = *this;
  for (auto& t : out.tables_) {
    for (auto& s : t) {
      if (s) s->key.reset();
    }
  }
  return out;
}

std::vector<uint8_t> CuckooTable::serialize() const {
  ByteWriter w;
  w.tag(kTableMagic);
  w.u16(kTableVersion);
  w.u64(params_.table_size);
  w.u64(params_.seeds.first);
  w.u64(params_.seeds.second);
  w.u32(params_.max_kicks);
  for (const auto& t : tables_) {
    for (const auto& s : t) {
      if (!s) {
        w.u8(0);
        continue;
      }
      w.u8(s->key ? (kSlotOccupied | kSlotKeyed) : kSlotOccupied);
      w.u64(s->entry.element);
      if (s->key) w.u64(s->key->bits);
    }
  }
  return std::move(w).take();
}

CuckooTable CuckooTable::deserialize(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_tag(kTableMagic);
  if (r.u16() != kTableVersion) throw ParseError("unsupported cuckoo table version");
  CuckooParams params;
  params.table_size = r.u64();
  params.seeds.first = r.u64();
  params.seeds.second = r.u64();
  params.max_kicks = r.u32();
  // Each slot needs at least its flag byte.
  if (params.table_size == 0 || params.table_size > r.remaining() / 2) {
    throw ParseError("cuckoo table size inconsistent with payload");
  }
  CuckooTable table(params);
  for (auto& t : table.tables_) {
    for (auto& s : t) {
      const uint8_t flags = r.u8();
      if (flags & ~(kSlotOccupied | kSlotKeyed)) throw ParseError("unknown slot flags");
      if (!(flags & kSlotOccupied)) {
        if (flags != 0) throw ParseError("keyed flag on an empty slot");
        continue;
      }
      CuckooSlot slot{std::nullopt, BlindedEntry{r.u64()}};
      if (flags & kSlotKeyed) slot.key = Fingerprint{r.u64()};
      s = slot;
    }
  }
  r.expect_end();
  return table;
}

CuckooTable build(std::span<const KeyedEntry> entries, const CuckooParams& params) {
  return CuckooTable::build(entries, params);
}

SlotPositions positions(const Fingerprint& fp, const CuckooTable& table) { return table.positions(fp); }

std::optional<BlindedEntry> lookup(const Fingerprint& fp, const CuckooTable& table) {
  return table.lookup(fp);
}

ReseedingBuild build_with_reseed(std::span<const KeyedEntry> entries, uint64_t table_size,
                                 uint64_t base_seed, uint32_t max_kicks, int max_attempts) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const uint64_t a = static_cast<uint64_t>(attempt);
    CuckooParams params{table_size,
                        {mix64(2 * a, base_seed ^ kReseedStream), mix64(2 * a + 1, base_seed ^ kReseedStream)},
                        max_kicks};
    try {
      return {CuckooTable::build(entries, params), attempt + 1};
    } catch (const ReseedNeededError&) {
    }
  }
  throw ReseedNeededError("cuckoo build failed after " + std::to_string(max_attempts) +
                          " seed attempts");
}

uint64_t table_size_for_load(std::size_t entries, double load) {
  if (!(load > 0.0)) throw DomainError("load factor must be positive");
  const auto m = static_cast<uint64_t>(std::ceil(static_cast<double>(entries) / (2.0 * load)));
  return std::max<uint64_t>({m, entries, 1});
}

}  // namespace cssim
