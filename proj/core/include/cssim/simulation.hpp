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

// End-to-end scenario: corpus, published database, detection server and a
// population of device clients, plus the metrics a run produces.

#include <atomic>
#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "cssim/adversary.hpp"
#include "cssim/config.hpp"
#include "cssim/corpus.hpp"
#include "cssim/protocol.hpp"

namespace cssim {

struct UploadReceipt {
  uint64_t sequence;
  bool synthetic;
  IngestOutcome outcome;
  std::size_t wire_bytes;
};

// Owns one detection deployment. upload() is safe to call concurrently for
// different clients.
class Scenario {
 public:
  explicit Scenario(const SimulationConfig& cfg);
  Scenario(const SimulationConfig& cfg, Corpus corpus);

  const SimulationConfig& config() const { return cfg_; }
  const Corpus& corpus() const { return corpus_; }
  const ServerKeys& keys() const { return server_.keys(); }
  const PublishedDb& published() const { return server_.published(); }
  DetectionServer& server() { return server_; }
  const DetectionServer& server() const { return server_; }

  // Client whose sharing polynomial is derived from (seed, account_id).
  DeviceClient make_client(uint64_t account_id, double synthetic_rate) const;
  DeviceClient make_client(uint64_t account_id) const;

  // Encodes, serializes and ingests one upload.
  UploadReceipt upload(DeviceClient& client, const CorpusImage& image, Rng& rng);
  UploadReceipt upload(DeviceClient& client, const Image& image, Rng& rng);
  UploadReceipt upload(DeviceClient& client, const Fingerprint& fp, const VisualDerivative& d, Rng& rng);

  uint64_t wire_bytes() const { return wire_bytes_.load(); }

 private:
  UploadReceipt send(DeviceClient& client, Voucher v);

  SimulationConfig cfg_;
  Corpus corpus_;
  DetectionServer server_;
  std::atomic<uint64_t> wire_bytes_{0};
};

Corpus build_corpus(const SimulationConfig& cfg);

enum class AccountClass { kHeavy, kLight, kClean };

const char* to_string(AccountClass c);

// Class of account index i (0-based) for the configured population.
AccountClass account_class(const SimulationConfig& cfg, int index);

struct AccountSummary {
  uint64_t account_id = 0;
  AccountClass cls = AccountClass::kClean;
  uint64_t uploads = 0;
  uint64_t db_uploads = 0;    // database content chosen by the user
  uint64_t real_matches = 0;  // database uploads sent as real vouchers
  uint64_t synthetic = 0;
  uint64_t matched_observed = 0;  // what the server counted
  bool eligible = false;          // real >= t and n >= t + 2 * synthetic
  bool reported = false;
  uint64_t inliers = 0;
  bool report_verified = false;  // derivatives equal the upload log's
};

struct AttackSummary {
  std::string attack;
  uint64_t attempts = 0;
  uint64_t successes = 0;
  double success_rate = 0.0;
  double mean_edits = 0.0;
  double mean_queries = 0.0;
  double mean_hamming = 0.0;
  double mean_distortion = 0.0;
  uint64_t budget_violations = 0;  // audited post hoc; must stay 0
  AttackBudget budget;             // of the first image; sizes are uniform
  std::vector<std::pair<std::string, AttackOutcome>> outcomes;
};

struct SimulationMetrics {
  uint64_t accounts = 0;
  uint64_t uploads = 0;
  uint64_t real_vouchers = 0;
  uint64_t synthetic_vouchers = 0;
  uint64_t db_uploads = 0;
  uint64_t real_matches = 0;
  uint64_t matched = 0;
  uint64_t unmatched = 0;
  uint64_t duplicates = 0;
  uint64_t parse_errors = 0;
  uint64_t bytes_on_wire = 0;
  uint64_t shares_observed = 0;
  uint64_t reports = 0;
  uint64_t true_positives = 0;
  uint64_t false_positives = 0;
  uint64_t eligible_accounts = 0;
  uint64_t eligible_reported = 0;
  uint64_t pending_accounts = 0;  // >= t observed shares, no report
  uint64_t below_threshold_real = 0;
  uint64_t derivatives_verified = 0;
  uint64_t synthetic_excluded = 0;
  std::vector<AccountSummary> per_account;
  std::vector<AttackSummary> attacks;
};

struct SimulationRun {
  SimulationMetrics metrics;
  std::vector<DetectionReport> reports;
  std::vector<std::vector<UploadRecord>> logs;  // per account, index order
};

// Deterministic in the config; cfg.jobs only changes how accounts are spread
// over threads. Attack campaigns run when enabled.
SimulationRun run_simulation_detailed(const SimulationConfig& cfg);
SimulationMetrics run_simulation(const SimulationConfig& cfg);

// Attack campaigns over the attack corpus.
Corpus build_attack_corpus(const SimulationConfig& cfg);
AttackSummary run_evade_campaign(const Corpus& corpus, const SimulationConfig& cfg, bool keep_outcomes);
AttackSummary run_collide_campaign(const Corpus& corpus, const SimulationConfig& cfg, bool keep_outcomes);

// JSON renderings; the output is what the shipped schemas describe.
nlohmann::json metrics_to_json(const SimulationMetrics& m, const SimulationConfig& cfg);
nlohmann::json attack_to_json(const AttackSummary& s, const SimulationConfig& cfg);
// Canonical text form: 2-space indent, trailing newline.
std::string dump_json(const nlohmann::json& doc);

// Schema documents compiled into the library.
const char* metrics_schema();
const char* config_schema();
const char* attack_schema();

}  // namespace cssim
