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

#include "cssim/psi.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "cssim/byte_io.hpp"
#include "cssim/error.hpp"
#include "cssim/sealed_box.hpp"

namespace cssim {

namespace {

constexpr std::string_view kVoucherMagic = "FTPV";
constexpr uint16_t kVoucherVersion = 1;
constexpr uint16_t kElementBytes = 8;
// Bound on a single ciphertext; real ones are a few hundred bytes.
constexpr uint32_t kMaxCiphertext = 1u << 20;

constexpr uint64_t kOuterDomain = 0x4f555445524b4559ULL;   // "OUTERKEY"
constexpr uint64_t kInnerDomain = 0x494e4e45524b4559ULL;   // "INNERKEY"
constexpr uint64_t kPickDomain = 0x5049434b504f5331ULL;    // "PICKPOS1"
constexpr uint64_t kFillerDomain = 0x46494c4c45523031ULL;  // "FILLER01"

constexpr std::size_t kInnerSize = kDerivativeSide * kDerivativeSide + kSealTagSize;

std::vector<uint8_t> outer_plaintext(const ShamirShare& share, std::span<const uint8_t> inner) {
  ByteWriter w;
  w.u64(share.x.value());
  w.u64(share.y.value());
  w.u32(static_cast<uint32_t>(inner.size()));
  w.bytes(inner);
  return std::move(w).take();
}

const BlindedEntry& entry_at(const CuckooTable& table, int t, uint64_t idx) {
  const auto& slot = table.slot(t, idx);
  if (!slot) throw DomainError("published table has an empty slot; fillers missing");
  return slot->entry;
}

uint64_t next_sequence(ClientAccount& account) {
  return next_unused_x(account.secret.used_xs(), account.secret.modulus());
}

}  // namespace

ServerKeys ServerKeys::generate(const Group& group, uint64_t share_modulus, Rng& rng) {
  ServerKeys k{group, group.random_exponent(rng), rng.next_u64(), rng.next_u64(), share_modulus};
  return k;
}

uint64_t blind(const ServerKeys& keys, const Fingerprint& fp) {
  return keys.group.exp(keys.group.hash_to_group(fp), keys.alpha);
}

PublishedDb BlindedDatabase::published(const ServerKeys& keys) const {
  return {keys.group, public_key, keys.share_modulus, table.without_keys()};
}

BlindedDatabase publish_blinded_db(const ServerKeys& keys, std::span<const Fingerprint> fingerprints,
                                   double load) {
  std::vector<KeyedEntry> entries;
  entries.reserve(fingerprints.size());
  for (const auto& fp : fingerprints) entries.push_back({fp, BlindedEntry{blind(keys, fp)}});
  auto built = build_with_reseed(entries, table_size_for_load(entries.size(), load), keys.cuckoo_seed);
  built.table.fill_empty([&](int t, uint64_t idx) {
    const uint64_t e = 1 + mix64(idx * 2 + static_cast<uint64_t>(t), keys.filler_seed ^ kFillerDomain) %
                               (keys.group.order() - 1);
    return BlindedEntry{keys.group.exp_g(e)};
  });
  return {std::move(built.table), keys.public_key()};
}

std::vector<uint8_t> serialize_voucher(const Voucher& v) {
  ByteWriter w;
  w.tag(kVoucherMagic);
  w.u16(kVoucherVersion);
  w.u64(v.account_id);
  w.u64(v.sequence);
  for (const auto& h : v.headers) {
    w.u16(kElementBytes);
    w.u64(h.ephemeral);
    w.u32(static_cast<uint32_t>(h.ciphertext.size()));
    w.bytes(h.ciphertext);
  }
  return std::move(w).take();
}

Voucher parse_voucher(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_tag(kVoucherMagic);
  if (r.u16() != kVoucherVersion) throw ParseError("unsupported voucher version");
  Voucher v;
  v.account_id = r.u64();
  v.sequence = r.u64();
  for (auto& h : v.headers) {
    if (r.u16() != kElementBytes) throw ParseError("unexpected group element length");
    h.ephemeral = r.u64();
    const uint32_t n = r.u32();
    if (n > kMaxCiphertext) throw ParseError("ciphertext length out of range");
    const auto ct = r.bytes(n);
    h.ciphertext.assign(ct.begin(), ct.end());
  }
  r.expect_end();
  return v;
}

Digest128 outer_key(uint64_t shared_element, int position, uint64_t account_id, uint64_t sequence) {
  return digest({kOuterDomain, shared_element, static_cast<uint64_t>(position), account_id, sequence});
}

Digest128 inner_key(const FieldElement& adkey, uint64_t account_id, uint64_t sequence) {
  return digest({kInnerDomain, adkey.value(), adkey.modulus(), account_id, sequence});
}

std::vector<uint8_t> seal_derivative(const FieldElement& adkey, uint64_t account_id,
                                     uint64_t sequence, const VisualDerivative& d) {
  return seal(inner_key(adkey, account_id, sequence), d.pixels);
}

std::optional<VisualDerivative> open_derivative(const FieldElement& adkey, uint64_t account_id,
                                                uint64_t sequence,
                                                std::span<const uint8_t> inner_ciphertext) {
  auto plain = open_sealed(inner_key(adkey, account_id, sequence), inner_ciphertext);
  if (!plain || plain->size() != kDerivativeSide * kDerivativeSide) return std::nullopt;
  VisualDerivative d;
  std::copy(plain->begin(), plain->end(), d.pixels.begin());
  return d;
}

Voucher client_encode(const Fingerprint& fp, const Image& image, ClientAccount& account,
                      const PublishedDb& db, Rng& rng) {
  return client_encode(fp, make_visual_derivative(image), account, db, rng);
}

Voucher client_encode(const Fingerprint& fp, const VisualDerivative& derivative,
                      ClientAccount& account, const PublishedDb& db, Rng& rng) {
  const uint64_t seq = next_sequence(account);
  const uint64_t p = account.secret.modulus();
  const ShamirShare share = deal_share(account.secret, FieldElement(seq, p));
  const auto inner = seal_derivative(account.secret.adkey(), account.account_id, seq, derivative);
  const auto plaintext = outer_plaintext(share, inner);

  const Group& g = db.group;
  const uint64_t h = g.hash_to_group(fp);
  const SlotPositions pos = db.table.positions(fp);
  Voucher v{account.account_id, seq, {}};
  for (int j = 0; j < 2; ++j) {
    const uint64_t beta = g.random_exponent(rng);
    const uint64_t shared = g.exp(entry_at(db.table, j, pos[j]).element, beta);
    v.headers[j].ephemeral = g.exp(h, beta);
    v.headers[j].ciphertext = seal(outer_key(shared, j, account.account_id, seq), plaintext);
  }
  return v;
}

Voucher client_encode_synthetic(ClientAccount& account, const PublishedDb& db, Rng& rng) {
  const uint64_t seq = next_sequence(account);
  const ShamirShare share = deal_synthetic(rng, account.secret);
  std::vector<uint8_t> inner(kInnerSize);
  for (auto& b : inner) b = static_cast<uint8_t>(rng.next_u64());
  const auto plaintext = outer_plaintext(share, inner);

  const Group& g = db.group;
  std::array<uint64_t, 2> betas{g.random_exponent(rng), g.random_exponent(rng)};
  Voucher v{account.account_id, seq, {}};
  for (int j = 0; j < 2; ++j) v.headers[j].ephemeral = g.exp_g(betas[j]);
  const int open_at = static_cast<int>(
      mix64(v.headers[0].ephemeral ^ mix64(v.headers[1].ephemeral, kPickDomain),
            account.account_id ^ mix64(seq, kPickDomain)) & 1);
  for (int j = 0; j < 2; ++j) {
    Digest128 key;
    if (j == open_at) {
      key = outer_key(g.exp(db.public_key, betas[j]), j, account.account_id, seq);
    } else {
      key = {rng.next_u64(), rng.next_u64()};
    }
    v.headers[j].ciphertext = seal(key, plaintext);
  }
  return v;
}

std::optional<OpenedVoucher> server_process_voucher(const ServerKeys& keys, const Voucher& v) {
  const Group& g = keys.group;
  for (const auto& h : v.headers) {
    if (!g.contains(h.ephemeral)) throw ParseError("voucher element outside the group");
  }
  for (int j = 0; j < 2; ++j) {
    const auto& h = v.headers[j];
    const uint64_t shared = g.exp(h.ephemeral, keys.alpha);
    auto plain = open_sealed(outer_key(shared, j, v.account_id, v.sequence), h.ciphertext);
    if (!plain) continue;

    ByteReader r(*plain);
    const uint64_t x = r.u64();
    const uint64_t y = r.u64();
    const uint32_t n = r.u32();
    const auto inner = r.bytes(n);
    r.expect_end();
    if (x >= keys.share_modulus || y >= keys.share_modulus) throw ParseError("share outside the field");
    if (x != v.sequence) throw ParseError("share index does not match voucher sequence");
    return OpenedVoucher{{FieldElement(x, keys.share_modulus), FieldElement(y, keys.share_modulus)},
                         std::vector<uint8_t>(inner.begin(), inner.end()),
                         j};
  }
  return std::nullopt;
}

}  // namespace cssim
