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

#include "cssim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "cssim/error.hpp"
#include "cssim/group.hpp"
#include "cssim/keyed_hash.hpp"

namespace cssim {

namespace {

constexpr uint64_t kCorpusStream = 0x636f72707573;  // "corpus"
constexpr uint64_t kKeysStream = 0x6b657973;        // "keys"
constexpr uint64_t kSecretStream = uint64_t{1} << 56;
constexpr uint64_t kUploadStream = uint64_t{2} << 56;
constexpr uint64_t kEvadeStream = uint64_t{3} << 56;
constexpr uint64_t kCollideStream = uint64_t{4} << 56;

// Runs body(i) for i in [0, n) on up to `jobs` threads. Callers keep all
// per-item state indexed by i so the outcome does not depend on scheduling.
template <typename F>
void parallel_for(int n, int jobs, F&& body) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) {
    pool.emplace_back([&, j] {
      try {
        for (int i = next++; i < n; i = next++) body(i);
      } catch (...) {
        errors[j] = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

uint64_t corpus_seed(const SimulationConfig& cfg) { return derive_seed(cfg.seed, kCorpusStream); }

DetectionServer build_server(const SimulationConfig& cfg, const Corpus& corpus) {
  Rng rng(derive_seed(cfg.seed, kKeysStream));
  ServerKeys keys = ServerKeys::generate(Group::by_name(cfg.group_profile), cfg.share_modulus(), rng);
  std::vector<Fingerprint> fps;
  for (const CorpusImage* img : corpus.with_role(ImageRole::kDb)) fps.push_back(img->fingerprint);
  BlindedDatabase db = publish_blinded_db(keys, fps, cfg.table_load);
  return DetectionServer(std::move(keys), std::move(db), cfg.threshold);
}

template <typename Attack>
AttackSummary run_campaign(const char* name, const Corpus& corpus, const SimulationConfig& cfg,
                           bool keep_outcomes, Attack&& attack) {
  const auto& images = corpus.images;
  const int n = static_cast<int>(images.size());
  std::vector<AttackOutcome> outcomes(n);
  std::vector<uint8_t> violated(n, 0);
  parallel_for(n, cfg.jobs, [&](int i) {
    const Image& img = images[i].image;
    const AttackBudget budget =
        AttackBudget::scaled_for(img, cfg.attacks.edit_fraction, cfg.attacks.max_delta, cfg.attacks.max_queries);
    auto [edited, outcome, ok] = attack(i, img, budget);
    // Independent audit of the budget and of the success claim.
    const bool within = pixels_changed(img, edited) <= budget.max_edits &&
                        max_abs_delta(img, edited) <= budget.max_delta &&
                        outcome.queries <= budget.max_queries &&
                        outcome.edits == pixels_changed(img, edited);
    violated[i] = !within || outcome.success != ok;
    outcomes[i] = outcome;
  });

  AttackSummary s;
  s.attack = name;
  s.attempts = static_cast<uint64_t>(n);
  if (n > 0) {
    s.budget = AttackBudget::scaled_for(images[0].image, cfg.attacks.edit_fraction, cfg.attacks.max_delta,
                                        cfg.attacks.max_queries);
  }
  for (int i = 0; i < n; ++i) {
    const AttackOutcome& o = outcomes[i];
    s.successes += o.success;
    s.mean_edits += static_cast<double>(o.edits);
    s.mean_queries += static_cast<double>(o.queries);
    s.mean_hamming += o.hamming;
    s.mean_distortion += o.distortion;
    s.budget_violations += violated[i];
    if (keep_outcomes) s.outcomes.emplace_back(images[i].name, o);
  }
  if (n > 0) {
    const double d = n;
    s.success_rate = static_cast<double>(s.successes) / d;
    s.mean_edits /= d;
    s.mean_queries /= d;
    s.mean_hamming /= d;
    s.mean_distortion /= d;
  }
  return s;
}

struct AttackRun {
  Image image;
  AttackOutcome outcome;
  bool verified_success;
};

}  // namespace

Corpus build_corpus(const SimulationConfig& cfg) {
  if (cfg.corpus_dir) return load_corpus(*cfg.corpus_dir);
  return generate_corpus(corpus_seed(cfg), cfg.db_size, cfg.benign_size, cfg.image_size);
}

Corpus build_attack_corpus(const SimulationConfig& cfg) {
  const AttackConfig& a = cfg.attacks;
  if (a.corpus_dir) return load_corpus(*a.corpus_dir);
  return generate_corpus(corpus_seed(cfg), a.corpus_db, a.corpus_benign, a.image_size);
}

Scenario::Scenario(const SimulationConfig& cfg) : Scenario(cfg, build_corpus(cfg)) {}

Scenario::Scenario(const SimulationConfig& cfg, Corpus corpus)
    : cfg_(cfg), corpus_(std::move(corpus)), server_(build_server(cfg_, corpus_)) {}

DeviceClient Scenario::make_client(uint64_t account_id, double synthetic_rate) const {
  Rng rng(derive_seed(cfg_.seed, kSecretStream | account_id));
  return DeviceClient(account_id, AccountSecret::generate(cfg_.share_modulus(), cfg_.threshold, rng),
                      synthetic_rate);
}

DeviceClient Scenario::make_client(uint64_t account_id) const {
  return make_client(account_id, cfg_.synthetic_rate);
}

UploadReceipt Scenario::send(DeviceClient& client, Voucher v) {
  const std::vector<uint8_t> wire = serialize_voucher(v);
  wire_bytes_ += wire.size();
  const IngestOutcome outcome = server_.ingest(wire);
  return {v.sequence, client.upload_log().back().synthetic, outcome, wire.size()};
}

UploadReceipt Scenario::upload(DeviceClient& client, const Fingerprint& fp, const VisualDerivative& d,
                               Rng& rng) {
  return send(client, client_upload(client, fp, d, published(), rng));
}

UploadReceipt Scenario::upload(DeviceClient& client, const CorpusImage& image, Rng& rng) {
  return upload(client, image.fingerprint, make_visual_derivative(image.image), rng);
}

UploadReceipt Scenario::upload(DeviceClient& client, const Image& image, Rng& rng) {
  return upload(client, compute_fingerprint(image), make_visual_derivative(image), rng);
}

const char* to_string(AccountClass c) {
  switch (c) {
    case AccountClass::kHeavy:
      return "heavy";
    case AccountClass::kLight:
      return "light";
    case AccountClass::kClean:
      return "clean";
  }
  return "unknown";
}

AccountClass account_class(const SimulationConfig& cfg, int index) {
  const int heavy = static_cast<int>(std::lround(cfg.heavy_fraction * cfg.accounts));
  const int light = static_cast<int>(std::lround(cfg.light_fraction * cfg.accounts));
  if (index < heavy) return AccountClass::kHeavy;
  if (index < heavy + light) return AccountClass::kLight;
  return AccountClass::kClean;
}

SimulationRun run_simulation_detailed(const SimulationConfig& cfg) {
  validate(cfg);
  Scenario sim(cfg);
  const auto db = sim.corpus().with_role(ImageRole::kDb);
  const auto benign = sim.corpus().with_role(ImageRole::kBenign);
  std::set<Fingerprint> db_fps;
  for (const CorpusImage* img : db) db_fps.insert(img->fingerprint);

  // Derivatives are a pure function of the image; compute them once.
  std::vector<VisualDerivative> derivatives(sim.corpus().images.size());
  parallel_for(static_cast<int>(derivatives.size()), cfg.jobs,
               [&](int i) { derivatives[i] = make_visual_derivative(sim.corpus().images[i].image); });
  auto index_of = [&](const CorpusImage* img) { return static_cast<std::size_t>(img - sim.corpus().images.data()); };

  const int n = cfg.accounts;
  SimulationRun run;
  run.logs.resize(n);
  std::vector<AccountSummary> summaries(n);
  std::vector<uint64_t> duplicates(n, 0);

  parallel_for(n, cfg.jobs, [&](int i) {
    const uint64_t id = static_cast<uint64_t>(i) + 1;
    AccountSummary& s = summaries[i];
    s.account_id = id;
    s.cls = account_class(cfg, i);
    const double rate = s.cls == AccountClass::kHeavy  ? cfg.heavy_db_rate
                        : s.cls == AccountClass::kLight ? cfg.light_db_rate
                                                         : 0.0;
    DeviceClient client = sim.make_client(id);
    Rng rng(derive_seed(cfg.seed, kUploadStream | id));
    for (int u = 0; u < cfg.uploads_per_account; ++u) {
      const bool from_db = rng.bernoulli(rate);
      const auto& pool = from_db ? db : benign;
      const CorpusImage* img = pool[rng.uniform(pool.size())];
      const std::size_t k = index_of(img);
      const UploadReceipt r = sim.upload(client, img->fingerprint, derivatives[k], rng);
      ++s.uploads;
      s.db_uploads += from_db;
      s.synthetic += r.synthetic;
      s.real_matches += from_db && !r.synthetic;
      duplicates[i] += r.outcome == IngestOutcome::kDuplicate;
    }
    run.logs[i] = client.upload_log();
  });

  run.reports = sim.server().sweep();

  SimulationMetrics& m = run.metrics;
  m.accounts = static_cast<uint64_t>(n);
  const uint64_t t = static_cast<uint64_t>(cfg.threshold);
  for (int i = 0; i < n; ++i) {
    AccountSummary& s = summaries[i];
    const auto st = sim.server().account(s.account_id);
    if (st) {
      s.matched_observed = st->matched.size();
      m.unmatched += st->unmatched;
      m.parse_errors += st->parse_errors;
    }
    s.eligible = s.real_matches >= t && s.matched_observed >= t + 2 * s.synthetic;
    m.uploads += s.uploads;
    m.synthetic_vouchers += s.synthetic;
    m.db_uploads += s.db_uploads;
    m.real_matches += s.real_matches;
    m.matched += s.matched_observed;
    m.duplicates += duplicates[i];
    m.eligible_accounts += s.eligible;
    m.below_threshold_real += s.real_matches < t;
  }
  m.real_vouchers = m.uploads - m.synthetic_vouchers;
  m.shares_observed = m.matched;
  m.parse_errors += sim.server().unattributed_parse_errors();

  for (const DetectionReport& r : run.reports) {
    const std::size_t i = static_cast<std::size_t>(r.account_id - 1);
    AccountSummary& s = summaries[i];
    s.reported = true;
    s.inliers = r.inlier_sequences.size();
    m.synthetic_excluded += r.synthetic_excluded;

    std::vector<uint64_t> expected;
    for (const UploadRecord& rec : run.logs[i]) {
      if (!rec.synthetic && db_fps.contains(rec.fingerprint)) expected.push_back(rec.sequence);
    }
    bool ok = r.inlier_sequences == expected;
    for (std::size_t k = 0; ok && k < r.inlier_sequences.size(); ++k) {
      const UploadRecord& rec = run.logs[i][r.inlier_sequences[k] - 1];
      ok = rec.sequence == r.inlier_sequences[k] && rec.derivative == r.derivatives[k];
    }
    s.report_verified = ok;
    if (ok) m.derivatives_verified += r.derivatives.size();
    if (ok && s.real_matches >= t) {
      ++m.true_positives;
    } else {
      ++m.false_positives;
    }
  }
  m.reports = run.reports.size();
  for (const AccountSummary& s : summaries) {
    m.eligible_reported += s.eligible && s.reported;
    m.pending_accounts += !s.reported && s.matched_observed >= t;
  }
  m.bytes_on_wire = sim.wire_bytes();
  m.per_account = std::move(summaries);

  if (cfg.attacks.evade || cfg.attacks.collide) {
    const Corpus attack_corpus = build_attack_corpus(cfg);
    if (cfg.attacks.evade) m.attacks.push_back(run_evade_campaign(attack_corpus, cfg, false));
    if (cfg.attacks.collide) m.attacks.push_back(run_collide_campaign(attack_corpus, cfg, false));
  }
  return run;
}

SimulationMetrics run_simulation(const SimulationConfig& cfg) { return run_simulation_detailed(cfg).metrics; }

AttackSummary run_evade_campaign(const Corpus& corpus, const SimulationConfig& cfg, bool keep_outcomes) {
  return run_campaign("evade", corpus, cfg, keep_outcomes, [&](int i, const Image& img, const AttackBudget& b) {
    Rng rng(derive_seed(cfg.seed, kEvadeStream | static_cast<uint64_t>(i)));
    AttackResult r = evade(img, b, rng);
    const bool ok = compute_fingerprint(r.image) != compute_fingerprint(img);
    return AttackRun{std::move(r.image), r.outcome, ok};
  });
}

AttackSummary run_collide_campaign(const Corpus& corpus, const SimulationConfig& cfg, bool keep_outcomes) {
  return run_campaign("collide", corpus, cfg, keep_outcomes, [&](int i, const Image& img, const AttackBudget& b) {
    Rng rng(derive_seed(cfg.seed, kCollideStream | static_cast<uint64_t>(i)));
    const Fingerprint target{rng.next_u64()};
    AttackResult r = collide(img, target, b);
    const bool ok = compute_fingerprint(r.image) == target;
    return AttackRun{std::move(r.image), r.outcome, ok};
  });
}

}  // namespace cssim
