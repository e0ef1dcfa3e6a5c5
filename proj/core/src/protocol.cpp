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

#include "cssim/protocol.hpp"

#include <utility>

#include "cssim/error.hpp"

namespace cssim {

DeviceClient::DeviceClient(uint64_t account_id, AccountSecret secret, double synthetic_rate)
    : account_{account_id, std::move(secret)}, synthetic_rate_(synthetic_rate) {
  if (!(synthetic_rate >= 0.0 && synthetic_rate <= 1.0)) {
    throw DomainError("synthetic rate must lie in [0, 1]");
  }
}

Voucher client_upload(DeviceClient& client, const Image& image, const PublishedDb& db, Rng& rng) {
  return client_upload(client, compute_fingerprint(image), make_visual_derivative(image), db, rng);
}

Voucher client_upload(DeviceClient& client, const Fingerprint& fp, const VisualDerivative& derivative,
                      const PublishedDb& db, Rng& rng) {
  const bool synthetic = rng.bernoulli(client.synthetic_rate());
  Voucher v = synthetic ? client_encode_synthetic(client.account(), db, rng)
                        : client_encode(fp, derivative, client.account(), db, rng);
  client.record({v.sequence, synthetic, fp, derivative});
  return v;
}

const char* to_string(IngestOutcome o) {
  switch (o) {
    case IngestOutcome::kMatched:
      return "matched";
    case IngestOutcome::kUnmatched:
      return "unmatched";
    case IngestOutcome::kParseError:
      return "parse_error";
    case IngestOutcome::kDuplicate:
      return "duplicate";
  }
  return "unknown";
}

DetectionServer::DetectionServer(ServerKeys keys, BlindedDatabase db, int threshold)
    : keys_(std::move(keys)),
      db_(std::move(db)),
      published_(db_.published(keys_)),
      threshold_(threshold) {
  if (threshold < 1) throw DomainError("threshold must be at least 1");
}

DetectionServer::Slot& DetectionServer::slot_for(uint64_t account_id) {
  std::lock_guard lock(map_mu_);
  auto& slot = accounts_[account_id];
  if (!slot) {
    slot = std::make_unique<Slot>();
    slot->state.account_id = account_id;
  }
  return *slot;
}

IngestOutcome DetectionServer::record_parse_error(uint64_t account_id) {
  Slot& s = slot_for(account_id);
  std::lock_guard lock(s.mu);
  ++s.state.parse_errors;
  return IngestOutcome::kParseError;
}

IngestOutcome DetectionServer::ingest(std::span<const uint8_t> wire) {
  Voucher v;
  try {
    v = parse_voucher(wire);
  } catch (const ParseError&) {
    ++unattributed_parse_errors_;
    return IngestOutcome::kParseError;
  }
  return ingest(v);
}

IngestOutcome DetectionServer::ingest(const Voucher& v) {
  std::optional<OpenedVoucher> opened;
  try {
    opened = server_process_voucher(keys_, v);
  } catch (const ParseError&) {
    return record_parse_error(v.account_id);
  }

  Slot& s = slot_for(v.account_id);
  std::lock_guard lock(s.mu);
  if (!opened) {
    ++s.state.unmatched;
    return IngestOutcome::kUnmatched;
  }
  if (s.state.matched.contains(v.sequence)) return IngestOutcome::kDuplicate;
  s.state.matched.emplace(v.sequence, MatchedUpload{opened->share, std::move(opened->inner_ciphertext)});
  return IngestOutcome::kMatched;
}

std::vector<DetectionReport> DetectionServer::sweep() {
  std::vector<Slot*> slots;
  {
    std::lock_guard lock(map_mu_);
    for (auto& [id, slot] : accounts_) slots.push_back(slot.get());
  }

  std::vector<DetectionReport> reports;
  for (Slot* slot : slots) {
    std::lock_guard lock(slot->mu);
    AccountState& st = slot->state;
    if (st.reported || st.matched.size() < static_cast<std::size_t>(threshold_)) continue;

    NoisyShareSet set;
    set.t = threshold_;
    set.e_max = decoding_radius(st.matched.size(), threshold_);
    for (const auto& [seq, m] : st.matched) set.shares.push_back(m.share);
    const DecodeResult decoded = bw_decode(set);
    if (!decoded.recovered()) continue;

    const FieldElement adkey = (*decoded.poly)(FieldElement::zero(keys_.share_modulus));
    DetectionReport report{st.account_id, adkey, {}, {}, 0};
    for (const uint64_t seq : decoded.inlier_xs) {
      const auto& m = st.matched.at(seq);
      // A synthetic share can land on the polynomial by chance (probability
      // 1/p); its dummy payload then fails authentication and is dropped.
      auto d = open_derivative(adkey, st.account_id, seq, m.inner_ciphertext);
      if (!d) continue;
      report.inlier_sequences.push_back(seq);
      report.derivatives.push_back(*d);
    }
    // With n = t any points interpolate, so pure noise "decodes" too. A key
    // that authenticates fewer than t payloads is wrong; stay pending.
    if (report.inlier_sequences.size() < static_cast<std::size_t>(threshold_)) continue;
    report.synthetic_excluded = st.matched.size() - report.inlier_sequences.size();
    st.reported = true;
    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<uint64_t> DetectionServer::account_ids() const {
  std::lock_guard lock(map_mu_);
  std::vector<uint64_t> ids;
  for (const auto& [id, slot] : accounts_) ids.push_back(id);
  return ids;
}

std::optional<AccountState> DetectionServer::account(uint64_t account_id) const {
  Slot* slot = nullptr;
  {
    std::lock_guard lock(map_mu_);
    auto it = accounts_.find(account_id);
    if (it == accounts_.end()) return std::nullopt;
    slot = it->second.get();
  }
  std::lock_guard lock(slot->mu);
  return slot->state;
}

IngestOutcome server_ingest(DetectionServer& server, std::span<const uint8_t> wire) {
  return server.ingest(wire);
}

std::vector<DetectionReport> server_sweep(DetectionServer& server) { return server.sweep(); }

}  // namespace cssim
