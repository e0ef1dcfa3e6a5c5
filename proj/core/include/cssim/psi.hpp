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

// DH-blinded matching layer.
//
// The server holds a secret exponent alpha and publishes, per database
// fingerprint fp, the blinded entry P = H(fp)^alpha in a cuckoo table, plus
// its public key L = g^alpha. For an upload the client computes, for each
// of the two cuckoo positions of its own fingerprint,
//
//   Q = H(fp)^beta          (sent)
//   K = P_slot^beta         (kept; keys the outer layer)
//
// The server recomputes K' = Q^alpha = H(fp)^(alpha * beta), which equals K
// exactly when the slot blinds the same fingerprint, so the outer layer
// opens at one position for a database hit and at none otherwise.
//
// Synthetic vouchers use Q = g^beta and K = L^beta at one position chosen
// from the header material, so the server opens them without being able to
// tell them apart from real hits.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cssim/cuckoo.hpp"
#include "cssim/fingerprint.hpp"
#include "cssim/group.hpp"
#include "cssim/keyed_hash.hpp"
#include "cssim/rng.hpp"
#include "cssim/shamir.hpp"

namespace cssim {

inline constexpr double kDefaultTableLoad = 0.45;

// Server-held secrets. alpha is never written into any published artifact.
struct ServerKeys {
  Group group;
  uint64_t alpha;
  uint64_t cuckoo_seed;
  uint64_t filler_seed;
  uint64_t share_modulus;  // field the Shamir shares live in

  static ServerKeys generate(const Group& group, uint64_t share_modulus, Rng& rng);
  uint64_t public_key() const { return group.exp_g(alpha); }
};

// What clients download: the keyless table, group and public key.
struct PublishedDb {
  Group group;
  uint64_t public_key;
  uint64_t share_modulus;
  CuckooTable table;
};

// Server-side view of the published database: the keyed table, with every
// empty slot holding a filler element so that clients always find one.
struct BlindedDatabase {
  CuckooTable table;
  uint64_t public_key;

  PublishedDb published(const ServerKeys& keys) const;
};

uint64_t blind(const ServerKeys& keys, const Fingerprint& fp);

// Throws DomainError for duplicate fingerprints and ReseedNeededError when
// every cuckoo seed attempt fails.
BlindedDatabase publish_blinded_db(const ServerKeys& keys, std::span<const Fingerprint> fingerprints,
                                   double load = kDefaultTableLoad);

struct VoucherHeader {
  uint64_t ephemeral = 0;           // Q
  std::vector<uint8_t> ciphertext;  // sealed outer layer

  friend bool operator==(const VoucherHeader&, const VoucherHeader&) = default;
};

struct Voucher {
  uint64_t account_id = 0;
  uint64_t sequence = 0;  // equals the Shamir x of the carried share
  std::array<VoucherHeader, 2> headers;

  friend bool operator==(const Voucher&, const Voucher&) = default;
};

// Wire format, little-endian:
//   "FTPV" | version u16 | account_id u64 | sequence u64 |
//   2 x [ element length u16 | element bytes | ciphertext length u32 | ciphertext ]
std::vector<uint8_t> serialize_voucher(const Voucher& v);
// Throws ParseError on truncation, bad magic/version or trailing bytes.
Voucher parse_voucher(std::span<const uint8_t> bytes);

// Client-side account material.
struct ClientAccount {
  uint64_t account_id;
  AccountSecret secret;
};

// Real voucher for fp carrying the share f(seq) and the image's visual
// derivative sealed under adkey. Throws CapacityError when the account has
// no share index left.
Voucher client_encode(const Fingerprint& fp, const Image& image, ClientAccount& account,
                      const PublishedDb& db, Rng& rng);
Voucher client_encode(const Fingerprint& fp, const VisualDerivative& derivative,
                      ClientAccount& account, const PublishedDb& db, Rng& rng);

// Synthetic voucher: random share, dummy inner ciphertext, openable at one
// header. Same byte length as a real voucher.
Voucher client_encode_synthetic(ClientAccount& account, const PublishedDb& db, Rng& rng);

struct OpenedVoucher {
  ShamirShare share;
  std::vector<uint8_t> inner_ciphertext;
  int position;  // header index that opened
};

// nullopt = unmatched. Throws ParseError for headers whose ephemeral element
// is outside the group or whose opened payload is malformed.
std::optional<OpenedVoucher> server_process_voucher(const ServerKeys& keys, const Voucher& v);

// Inner layer: visual derivative sealed under the account key.
Digest128 inner_key(const FieldElement& adkey, uint64_t account_id, uint64_t sequence);
std::vector<uint8_t> seal_derivative(const FieldElement& adkey, uint64_t account_id,
                                     uint64_t sequence, const VisualDerivative& d);
std::optional<VisualDerivative> open_derivative(const FieldElement& adkey, uint64_t account_id,
                                                uint64_t sequence,
                                                std::span<const uint8_t> inner_ciphertext);

// Outer-layer key for header j.
Digest128 outer_key(uint64_t shared_element, int position, uint64_t account_id, uint64_t sequence);

}  // namespace cssim
