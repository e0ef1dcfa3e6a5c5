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

// Device clients, the detection server's per-account state machine and the
// threshold sweep.

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "cssim/fingerprint.hpp"
#include "cssim/psi.hpp"
#include "cssim/rng.hpp"
#include "cssim/rs_decode.hpp"
#include "cssim/shamir.hpp"

namespace cssim {

inline constexpr double kDefaultSyntheticRate = 0.05;

// What the client itself knows about each upload. Used by tests and the
// simulation to cross-check reports; never sent to the server.
struct UploadRecord {
  uint64_t sequence;
  bool synthetic;
  Fingerprint fingerprint;
  VisualDerivative derivative;
};

class DeviceClient {
 public:
  // Throws DomainError unless 0 <= synthetic_rate <= 1.
  DeviceClient(uint64_t account_id, AccountSecret secret, double synthetic_rate);

  uint64_t account_id() const { return account_.account_id; }
  const AccountSecret& secret() const { return account_.secret; }
  double synthetic_rate() const { return synthetic_rate_; }
  const std::vector<UploadRecord>& upload_log() const { return log_; }

  ClientAccount& account() { return account_; }
  void record(UploadRecord r) { log_.push_back(std::move(r)); }

 private:
  ClientAccount account_;
  double synthetic_rate_;
  std::vector<UploadRecord> log_;
};

// One upload: with probability rho a synthetic voucher, otherwise a real one
// for the image's fingerprint. The sequence number advances exactly once.
Voucher client_upload(DeviceClient& client, const Image& image, const PublishedDb& db, Rng& rng);
// Same, for an image whose fingerprint and derivative are already known.
Voucher client_upload(DeviceClient& client, const Fingerprint& fp, const VisualDerivative& derivative,
                      const PublishedDb& db, Rng& rng);

enum class IngestOutcome { kMatched, kUnmatched, kParseError, kDuplicate };

const char* to_string(IngestOutcome o);

struct MatchedUpload {
  ShamirShare share;
  std::vector<uint8_t> inner_ciphertext;
};

// Server-side accumulation for one account. Unmatched vouchers leave only a
// counter behind.
struct AccountState {
  uint64_t account_id = 0;
  std::map<uint64_t, MatchedUpload> matched;  // keyed by sequence number
  uint64_t unmatched = 0;
  uint64_t parse_errors = 0;
  bool reported = false;
};

struct DetectionReport {
  uint64_t account_id;
  FieldElement adkey;
  std::vector<uint64_t> inlier_sequences;
  std::vector<VisualDerivative> derivatives;  // parallel to inlier_sequences
  std::size_t synthetic_excluded;

  friend bool operator==(const DetectionReport&, const DetectionReport&) = default;
};

// Ingest is safe to call concurrently; vouchers of one account serialise on
// that account's lock. A built server never changes its keys or table.
class DetectionServer {
 public:
  DetectionServer(ServerKeys keys, BlindedDatabase db, int threshold);

  const ServerKeys& keys() const { return keys_; }
  const BlindedDatabase& database() const { return db_; }
  const PublishedDb& published() const { return published_; }
  int threshold() const { return threshold_; }

  IngestOutcome ingest(std::span<const uint8_t> wire);
  IngestOutcome ingest(const Voucher& v);

  // Decodes every unreported account holding at least t matched shares with
  // e_max = floor((n - t) / 2). Recovered accounts yield one report each and
  // are not reported again; undecodable ones stay pending, as do accounts
  // whose decoded key authenticates fewer than t payloads. Reports are
  // ordered by account id.
  std::vector<DetectionReport> sweep();

  std::vector<uint64_t> account_ids() const;
  std::optional<AccountState> account(uint64_t account_id) const;
  // Wire messages that did not parse far enough to name an account.
  uint64_t unattributed_parse_errors() const { return unattributed_parse_errors_.load(); }

 private:
  struct Slot {
    std::mutex mu;
    AccountState state;
  };

  Slot& slot_for(uint64_t account_id);
  IngestOutcome record_parse_error(uint64_t account_id);

  ServerKeys keys_;
  BlindedDatabase db_;
  PublishedDb published_;
  int threshold_;

  mutable std::mutex map_mu_;
  std::map<uint64_t, std::unique_ptr<Slot>> accounts_;
  std::atomic<uint64_t> unattributed_parse_errors_{0};
};

IngestOutcome server_ingest(DetectionServer& server, std::span<const uint8_t> wire);
std::vector<DetectionReport> server_sweep(DetectionServer& server);

}  // namespace cssim
