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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every selected criterion passes.
//
//   cssim_acceptance [--criterion N]...

#include <algorithm>
#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "cssim/adversary.hpp"
#include "cssim/cuckoo.hpp"
#include "cssim/error.hpp"
#include "cssim/psi.hpp"
#include "cssim/rs_decode.hpp"
#include "cssim/sealed_box.hpp"
#include "cssim/simulation.hpp"
#include "golden_vectors.hpp"

namespace cssim::acceptance {
namespace {

namespace fs = std::filesystem;

const fs::path kSourceDir = CSSIM_SOURCE_DIR;

fs::path demo_config() { return kSourceDir / "configs" / "demo.json"; }
fs::path golden_dir() { return kSourceDir / "tests" / "golden"; }

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int digits = 3) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << x;
  return ss.str();
}

// 1. End-to-end completeness on the demo scenario.
Verdict end_to_end() {
  const SimulationConfig cfg = load_config(demo_config());
  const auto start = std::chrono::steady_clock::now();
  const SimulationRun run = run_simulation_detailed(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const SimulationMetrics& m = run.metrics;
  const uint64_t t = static_cast<uint64_t>(cfg.threshold);

  const Corpus corpus = build_corpus(cfg);
  std::set<Fingerprint> db;
  for (const CorpusImage* ci : corpus.with_role(ImageRole::kDb)) db.insert(ci->fingerprint);

  std::map<uint64_t, int> reports_per_account;
  std::size_t mismatched = 0;
  for (const DetectionReport& r : run.reports) {
    ++reports_per_account[r.account_id];
    const auto it = std::find_if(m.per_account.begin(), m.per_account.end(),
                                 [&](const AccountSummary& a) { return a.account_id == r.account_id; });
    const auto& log = run.logs.at(static_cast<std::size_t>(it - m.per_account.begin()));
    std::vector<uint64_t> expected;
    for (const UploadRecord& u : log) {
      if (!u.synthetic && db.contains(u.fingerprint)) expected.push_back(u.sequence);
    }
    if (r.inlier_sequences != expected) ++mismatched;
    for (std::size_t i = 0; i < r.inlier_sequences.size(); ++i) {
      const auto u = std::find_if(log.begin(), log.end(),
                                  [&](const UploadRecord& x) { return x.sequence == r.inlier_sequences[i]; });
      if (u == log.end() || u->derivative != r.derivatives[i]) ++mismatched;
    }
  }

  std::size_t missed = 0;
  std::size_t below_reported = 0;
  std::size_t duplicates = 0;
  for (const AccountSummary& a : m.per_account) {
    const int n = reports_per_account.contains(a.account_id) ? reports_per_account[a.account_id] : 0;
    if (n > 1) ++duplicates;
    if (a.eligible && n != 1) ++missed;
    if (a.real_matches < t && n != 0) ++below_reported;
  }
  const bool pass = m.accounts == 50 && m.eligible_accounts > 0 && missed == 0 && below_reported == 0 &&
                    duplicates == 0 && mismatched == 0 && secs < 10.0;
  return {pass, std::to_string(m.eligible_accounts) + " eligible, " + std::to_string(m.reports) + " reports, " +
                    std::to_string(missed) + " missed, " + std::to_string(below_reported) +
                    " below-threshold reported, " + std::to_string(mismatched) + " log mismatches, " +
                    fmt(secs, 2) + " s"};
}

// 2. Shamir privacy by exhaustive polynomial search at p = 97.
Verdict shamir_privacy() {
  constexpr uint64_t p = 97;
  Rng rng(0x5348);
  std::size_t inconsistent = 0;
  std::size_t bad_reconstruct = 0;
  std::size_t cases = 0;
  for (int t : {2, 3}) {
    for (int trial = 0; trial < 100; ++trial) {
      ++cases;
      AccountSecret secret = AccountSecret::generate(p, t, rng);
      std::vector<uint64_t> xs;
      for (uint64_t x = 1; x < p; ++x) xs.push_back(x);
      std::vector<ShamirShare> shares;
      for (std::size_t i = 0; i < static_cast<std::size_t>(t + 3); ++i) {
        std::swap(xs[i], xs[i + rng.uniform(xs.size() - i)]);
        shares.push_back(deal_share(secret, FieldElement(xs[i], p)));
      }
      // t - 1 shares: every candidate constant term has exactly one
      // completing polynomial of degree <= t - 1.
      const std::span<const ShamirShare> seen(shares.data(), static_cast<std::size_t>(t - 1));
      std::vector<int> count(p, 0);
      std::vector<uint64_t> coeffs(static_cast<std::size_t>(t), 0);
      const uint64_t combos = t == 2 ? p * p : p * p * p;
      for (uint64_t code = 0; code < combos; ++code) {
        uint64_t c = code;
        for (auto& k : coeffs) {
          k = c % p;
          c /= p;
        }
        bool fits = true;
        for (const auto& s : seen) {
          uint64_t y = 0;
          for (std::size_t k = coeffs.size(); k-- > 0;) y = (y * s.x.value() + coeffs[k]) % p;
          fits &= y == s.y.value();
        }
        if (fits) ++count[coeffs[0]];
      }
      if (std::any_of(count.begin(), count.end(), [](int n) { return n != 1; })) ++inconsistent;

      // Any t shares reconstruct.
      std::vector<int> pick(shares.size(), 0);
      std::fill(pick.begin(), pick.begin() + t, 1);
      std::sort(pick.begin(), pick.end());
      do {
        std::vector<ShamirShare> subset;
        for (std::size_t i = 0; i < pick.size(); ++i) {
          if (pick[i]) subset.push_back(shares[i]);
        }
        if (reconstruct(subset, t) != secret.adkey()) ++bad_reconstruct;
      } while (std::next_permutation(pick.begin(), pick.end()));
    }
  }
  return {inconsistent == 0 && bad_reconstruct == 0,
          std::to_string(cases) + " secrets, " + std::to_string(inconsistent) + " leaking, " +
              std::to_string(bad_reconstruct) + " bad reconstructions"};
}

// 3. Berlekamp-Welch against the subset oracle.
Verdict rs_oracle() {
  Rng rng(0x5253);
  std::size_t instances = 0;
  std::size_t differ = 0;
  for (uint64_t p : {17ULL, 97ULL}) {
    for (int i = 0; i < 300; ++i) {
      const int t = 1 + static_cast<int>(rng.uniform(4));
      const int n = t + static_cast<int>(rng.uniform(13 - t));
      const int radius = decoding_radius(n, t);
      const int e = static_cast<int>(rng.uniform(radius + 1));
      std::vector<FieldElement> c;
      for (int k = 0; k < t; ++k) c.emplace_back(rng.uniform(p), p);
      const Polynomial f(std::move(c), p);
      std::vector<uint64_t> xs;
      for (uint64_t x = 1; x < p; ++x) xs.push_back(x);
      for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) std::swap(xs[k], xs[k + rng.uniform(xs.size() - k)]);
      NoisyShareSet s{{}, t, radius};
      for (int k = 0; k < n; ++k) {
        const FieldElement x(xs[k], p);
        FieldElement y = f(x);
        if (k < e) y = y + FieldElement(1 + rng.uniform(p - 1), p);
        s.shares.push_back({x, y});
      }
      ++instances;
      if (bw_decode(s) != brute_force_decode(s)) ++differ;
    }
  }
  return {instances >= 500 && differ == 0,
          std::to_string(instances) + " instances, " + std::to_string(differ) + " disagreements"};
}

// 4. Cuckoo builds at load 0.49.
Verdict cuckoo_suite() {
  constexpr std::size_t kKeys = 10'000;
  const uint64_t m = table_size_for_load(kKeys, 0.49);
  std::size_t built = 0;
  std::size_t reseeded = 0;
  std::size_t invariant_breaks = 0;
  std::size_t false_hits = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(derive_seed(0x4355, seed));
    std::set<Fingerprint> keys;
    while (keys.size() < kKeys) keys.insert({rng.next_u64()});
    std::vector<KeyedEntry> entries;
    for (const auto& k : keys) entries.push_back({k, {k.bits ^ 1}});
    const CuckooParams params{m, {rng.next_u64(), rng.next_u64()}, kDefaultMaxKicks};
    std::optional<CuckooTable> table;
    try {
      table = CuckooTable::build(entries, params);
    } catch (const ReseedNeededError&) {
      try {
        build_with_reseed(entries, m, rng.next_u64());
        ++reseeded;
      } catch (const ReseedNeededError&) {
      }
      continue;
    }
    ++reseeded;
    ++built;
    std::size_t seen = 0;
    for (int tb = 0; tb < 2; ++tb) {
      for (uint64_t i = 0; i < m; ++i) {
        const auto& slot = table->slot(tb, i);
        if (!slot || !slot->key) continue;
        ++seen;
        if (table->positions(*slot->key)[tb] != i || !keys.contains(*slot->key)) ++invariant_breaks;
      }
    }
    for (const auto& k : keys) {
      const SlotPositions pos = table->positions(k);
      const auto& a = table->slot(0, pos[0]);
      const auto& b = table->slot(1, pos[1]);
      const int held = (a && a->key == k) + (b && b->key == k);
      if (held != 1 || table->lookup(k) != BlindedEntry{k.bits ^ 1}) ++invariant_breaks;
    }
    if (seen != kKeys) ++invariant_breaks;
    for (int i = 0; i < 10'000; ++i) {
      const Fingerprint probe{rng.next_u64()};
      if (!keys.contains(probe) && table->lookup(probe)) ++false_hits;
    }
  }
  return {built >= 99 && invariant_breaks == 0 && false_hits == 0,
          std::to_string(built) + "/100 first-seed builds at m=" + std::to_string(m) + " (floor 99), " +
              std::to_string(reseeded) + "/100 with reseeding, " + std::to_string(invariant_breaks) +
              " invariant breaks, " + std::to_string(false_hits) + " false lookups"};
}

// 5. PSI soundness in the run63 group.
Verdict psi_soundness() {
  Rng rng(0x5053);
  const ServerKeys keys = ServerKeys::generate(Group::run(), kPrime61, rng);
  std::set<Fingerprint> db_set;
  while (db_set.size() < 1000) db_set.insert({rng.next_u64()});
  const std::vector<Fingerprint> db(db_set.begin(), db_set.end());
  const PublishedDb pub = publish_blinded_db(keys, db).published(keys);
  ClientAccount acct{1, AccountSecret::generate(kPrime61, 10, rng)};
  const VisualDerivative d{};

  auto openings = [&](const Voucher& v) {
    int n = 0;
    for (int j = 0; j < 2; ++j) {
      const uint64_t shared = keys.group.exp(v.headers[j].ephemeral, keys.alpha);
      n += open_sealed(outer_key(shared, j, v.account_id, v.sequence), v.headers[j].ciphertext).has_value();
    }
    return n;
  };

  std::size_t false_openings = 0;
  std::size_t sent = 0;
  while (sent < 100'000) {
    const Fingerprint fp{rng.next_u64()};
    if (db_set.contains(fp)) continue;
    false_openings += static_cast<std::size_t>(openings(client_encode(fp, d, acct, pub, rng)));
    ++sent;
  }
  std::size_t single = 0;
  for (int i = 0; i < 10'000; ++i) {
    single += openings(client_encode(db[rng.uniform(db.size())], d, acct, pub, rng)) == 1;
  }
  return {false_openings == 0 && single == 10'000,
          std::to_string(false_openings) + " openings over 100000 non-matching, " + std::to_string(single) +
              "/10000 matching opened at exactly one position"};
}

// 6. Attack campaigns on the frozen demo attack corpus.
Verdict attacks() {
  const SimulationConfig cfg = load_config(demo_config());
  const Corpus corpus = build_attack_corpus(cfg);
  const auto frozen = golden::read_hex_file(golden_dir() / "attack_corpus.hex");
  const bool corpus_ok = frozen && *frozen == golden::corpus_fingerprints(corpus);
  const AttackSummary ev = run_evade_campaign(corpus, cfg, false);
  const AttackSummary co = run_collide_campaign(corpus, cfg, false);
  const bool pass = corpus_ok && corpus.images.size() == 1000 && ev.budget_violations == 0 &&
                    co.budget_violations == 0 && ev.success_rate >= 0.90 && co.success_rate >= 0.99;
  return {pass, std::string(corpus_ok ? "frozen corpus" : "corpus differs from frozen vector") + ", evade " +
                    fmt(ev.success_rate) + " (floor 0.90), collide " + fmt(co.success_rate) +
                    " (floor 0.99), budget violations " + std::to_string(ev.budget_violations + co.budget_violations)};
}

// 7. Detect-and-quit adversaries.
Verdict detect_and_quit() {
  const SimulationConfig cfg = load_config(demo_config());
  Scenario sim(cfg);
  Rng rng(0x4451);
  const std::size_t t = static_cast<std::size_t>(cfg.threshold);
  std::size_t after_quit_matches = 0;
  std::size_t after_quit_reports = 0;
  std::size_t early_quitters = 0;
  std::size_t early_reports = 0;
  std::size_t quit = 0;
  for (uint64_t i = 0; i < 100; ++i) {
    DeviceClient c = sim.make_client(10'000 + i, cfg.synthetic_rate);
    const bool early = i % 2 == 0;
    const std::size_t signal = early ? 1 + rng.uniform(t - 1) : 0;
    const StrategyTrace tr = detect_and_quit_strategy(c, sim, {80, signal, 5}, rng);
    quit += tr.quit;
    after_quit_matches += tr.matched_after_quit;
    after_quit_reports += tr.reports_after_quit;
    if (early) {
      ++early_quitters;
      early_reports += tr.reports.size();
    }
  }
  return {quit == 100 && after_quit_matches == 0 && after_quit_reports == 0 && early_reports == 0,
          std::to_string(quit) + "/100 quit, post-quit matches " + std::to_string(after_quit_matches) +
              ", post-quit reports " + std::to_string(after_quit_reports) + ", reports for " +
              std::to_string(early_quitters) + " quit-before-threshold adversaries " + std::to_string(early_reports)};
}

// 8. Byte-identical CLI output.
Verdict determinism() {
  auto run = [](std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return code == 0 ? out.str() : std::string();
  };
  const std::string cfg = demo_config().string();
  const std::string a = run({"run", "--config", cfg, "--quiet"});
  const std::string b = run({"run", "--config", cfg, "--quiet"});
  const std::string c = run({"run", "--config", cfg, "--seed", "99", "--quiet"});
  const std::string d = run({"run", "--config", cfg, "--seed", "99", "--quiet", "--jobs", "4"});
  const bool pass = !a.empty() && a == b && !c.empty() && c == d && a != c;
  return {pass, std::to_string(a.size()) + " bytes; same seed identical: " + (a == b ? "yes" : "no") +
                    "; --seed override identical across jobs: " + (c == d ? "yes" : "no")};
}

// 9. Golden wire-format vectors.
Verdict golden_vectors() {
  std::size_t checked = 0;
  std::vector<std::string> bad;
  for (const auto& [name, bytes] : golden::build_all()) {
    ++checked;
    const auto frozen = golden::read_hex_file(golden_dir() / (name + ".hex"));
    bool ok = frozen && *frozen == bytes;
    if (ok && name == "cuckoo_table") ok = CuckooTable::deserialize(*frozen).serialize() == *frozen;
    if (ok && name != "cuckoo_table") ok = serialize_voucher(parse_voucher(*frozen)) == *frozen;
    if (!ok) bad.push_back(name);
  }
  std::string detail = std::to_string(checked) + " vectors";
  for (const auto& n : bad) detail += ", mismatch: " + n;
  return {checked >= 2 && bad.empty(), detail};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Verdict()> check;
};

}  // namespace
}  // namespace cssim::acceptance

int main(int argc, char** argv) {
  using namespace cssim::acceptance;
  const std::vector<Criterion> all = {
      {1, "end-to-end completeness", end_to_end},
      {2, "Shamir privacy oracle", shamir_privacy},
      {3, "RS decoder oracle equivalence", rs_oracle},
      {4, "cuckoo structural suite", cuckoo_suite},
      {5, "PSI soundness", psi_soundness},
      {6, "attack success rates", attacks},
      {7, "detect-and-quit circumvention", detect_and_quit},
      {8, "determinism", determinism},
      {9, "wire-format golden vectors", golden_vectors},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected.insert(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: cssim_acceptance [--criterion N]...\n";
      return 2;
    }
  }

  int failed = 0;
  for (const Criterion& c : all) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !v.pass;
    std::cout << "criterion " << c.id << ": " << (v.pass ? "PASS" : "FAIL") << "  " << c.title << " -- "
              << v.detail << " [" << fmt(secs, 1) << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
