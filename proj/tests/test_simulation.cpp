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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "cssim/config.hpp"
#include "cssim/corpus.hpp"
#include "cssim/error.hpp"
#include "cssim/pgm.hpp"
#include "cssim/simulation.hpp"

namespace cssim {
namespace {

namespace fs = std::filesystem;

SimulationConfig quick_config() {
  SimulationConfig cfg;
  cfg.seed = 42;
  cfg.group_profile = "test31";
  cfg.threshold = 5;
  cfg.accounts = 12;
  cfg.uploads_per_account = 60;
  cfg.db_size = 20;
  cfg.benign_size = 60;
  cfg.image_size = 32;
  cfg.heavy_db_rate = 0.3;
  cfg.light_db_rate = 0.05;
  return cfg;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / ("cssim_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Config, DefaultsRoundTrip) {
  const SimulationConfig cfg;
  const SimulationConfig back = parse_config(to_json(cfg));
  EXPECT_EQ(to_json(back), to_json(cfg));
  EXPECT_EQ(cfg.share_modulus(), kPrime61);
}

TEST(Config, MinimalDocument) {
  const SimulationConfig cfg = parse_config_text(R"({"version": 1, "seed": 9})");
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.threshold, 10);
}

TEST(Config, Rejections) {
  const char* bad[] = {
      R"([])",
      R"({"seed": 1})",
      R"({"version": 2})",
      R"({"version": 1, "bogus": 1})",
      R"({"version": 1, "corpus": {"db_size": 1, "extra": 2}})",
      R"({"version": 1, "population": {"heavy": 0.1}})",
      R"({"version": 1, "attacks": {"evade": true, "budget": 3}})",
      R"({"version": 1, "threshold": 0})",
      R"({"version": 1, "threshold": "10"})",
      R"({"version": 1, "seed": -1})",
      R"({"version": 1, "synthetic_rate": 1.5})",
      R"({"version": 1, "field_profile": "test19"})",
      R"({"version": 1, "group_profile": "big"})",
      R"({"version": 1, "table_load": 0.6})",
      R"({"version": 1, "field_profile": "test17", "threshold": 17})",
      R"({"version": 1, "field_profile": "test97", "uploads_per_account": 200})",
      R"({"version": 1, "population": {"heavy_fraction": 0.7, "light_fraction": 0.7}})",
      R"({"version": 1, "corpus": {"db_size": 0}})",
      R"({"version": 1, "attacks": {"max_delta": 300}})",
      R"({"version": 1, "attacks": {"evade": 1}})",
      R"({"version": 1, "jobs": 0})",
      R"({"version": 1)",
  };
  for (const char* text : bad) EXPECT_THROW(parse_config_text(text), ConfigError) << text;
  EXPECT_THROW(load_config("/nonexistent/cssim.json"), ConfigError);
}

TEST(Config, RelativeCorpusDirResolvesAgainstConfig) {
  const fs::path dir = scratch("cfgdir");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << R"({"version": 1, "corpus": {"dir": "imgs"}})";
  const SimulationConfig cfg = load_config(dir / "c.json");
  ASSERT_TRUE(cfg.corpus_dir);
  EXPECT_EQ(*cfg.corpus_dir, dir / "imgs");
}

TEST(Config, DemoConfigLoads) {
  const SimulationConfig cfg = load_config(fs::path(CSSIM_SOURCE_DIR) / "configs" / "demo.json");
  EXPECT_EQ(cfg.threshold, 10);
  EXPECT_FALSE(cfg.attacks.evade);
}

TEST(Corpus, GenerateDeterministicAndPartitioned) {
  const Corpus a = generate_corpus(5, 3, 4, 32);
  const Corpus b = generate_corpus(5, 3, 4, 32);
  ASSERT_EQ(a.images.size(), 7u);
  EXPECT_EQ(a.with_role(ImageRole::kDb).size(), 3u);
  EXPECT_EQ(a.with_role(ImageRole::kBenign).size(), 4u);
  for (std::size_t i = 0; i < a.images.size(); ++i) {
    EXPECT_EQ(a.images[i].image, b.images[i].image);
    EXPECT_EQ(a.images[i].fingerprint, compute_fingerprint(a.images[i].image));
  }
  EXPECT_NE(generate_corpus(6, 3, 4, 32).images[0].image, a.images[0].image);
}

TEST(Corpus, WriteLoadRoundTrip) {
  const fs::path dir = scratch("corpus_rt");
  const Corpus a = generate_corpus(5, 2, 3, 24);
  write_corpus(dir, a);
  const Corpus b = load_corpus(dir);
  ASSERT_EQ(b.images.size(), a.images.size());
  for (std::size_t i = 0; i < a.images.size(); ++i) {
    EXPECT_EQ(b.images[i].name, a.images[i].name);
    EXPECT_EQ(b.images[i].role, a.images[i].role);
    EXPECT_EQ(b.images[i].image, a.images[i].image);
  }
  EXPECT_THROW(load_corpus(scratch("nothing")), Error);
}

TEST(Simulation, ZeroAccountsAllZero) {
  SimulationConfig cfg = quick_config();
  cfg.accounts = 0;
  const SimulationMetrics m = run_simulation(cfg);
  EXPECT_EQ(m.accounts, 0u);
  EXPECT_EQ(m.uploads, 0u);
  EXPECT_EQ(m.bytes_on_wire, 0u);
  EXPECT_EQ(m.shares_observed, 0u);
  EXPECT_EQ(m.reports, 0u);
  EXPECT_EQ(m.true_positives + m.false_positives, 0u);
  EXPECT_TRUE(m.per_account.empty());
}

TEST(Simulation, AllBenignNoReports) {
  SimulationConfig cfg = quick_config();
  cfg.heavy_db_rate = 0.0;
  cfg.light_db_rate = 0.0;
  cfg.synthetic_rate = 0.2;
  const SimulationMetrics m = run_simulation(cfg);
  EXPECT_EQ(m.uploads, 12u * 60u);
  EXPECT_EQ(m.db_uploads, 0u);
  EXPECT_EQ(m.reports, 0u);
  EXPECT_GT(m.synthetic_vouchers, 0u);
}

TEST(Simulation, ReportsAreVerified) {
  const SimulationRun run = run_simulation_detailed(quick_config());
  const SimulationMetrics& m = run.metrics;
  EXPECT_GT(m.reports, 0u);
  EXPECT_EQ(m.false_positives, 0u);
  EXPECT_EQ(m.true_positives, m.reports);
  EXPECT_EQ(m.eligible_reported, m.eligible_accounts);
  EXPECT_EQ(m.real_vouchers + m.synthetic_vouchers, m.uploads);
  EXPECT_EQ(m.matched + m.unmatched + m.duplicates + m.parse_errors, m.uploads);
  EXPECT_EQ(m.matched, m.real_matches + m.synthetic_vouchers);
  for (const auto& a : m.per_account) {
    if (a.reported) {
      EXPECT_TRUE(a.report_verified);
    }
    if (a.real_matches < 5) {
      EXPECT_FALSE(a.reported);
    }
  }
}

TEST(Simulation, DeterministicAndThreadIndependent) {
  SimulationConfig cfg = quick_config();
  const std::string a = dump_json(metrics_to_json(run_simulation(cfg), cfg));
  const std::string b = dump_json(metrics_to_json(run_simulation(cfg), cfg));
  cfg.jobs = 4;
  const std::string c = dump_json(metrics_to_json(run_simulation(cfg), cfg));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  cfg.seed += 1;
  EXPECT_NE(a, dump_json(metrics_to_json(run_simulation(cfg), cfg)));
}

TEST(Simulation, AccountClasses) {
  SimulationConfig cfg = quick_config();
  cfg.accounts = 10;
  cfg.heavy_fraction = 0.2;
  cfg.light_fraction = 0.3;
  EXPECT_EQ(account_class(cfg, 0), AccountClass::kHeavy);
  EXPECT_EQ(account_class(cfg, 1), AccountClass::kHeavy);
  EXPECT_EQ(account_class(cfg, 2), AccountClass::kLight);
  EXPECT_EQ(account_class(cfg, 4), AccountClass::kLight);
  EXPECT_EQ(account_class(cfg, 5), AccountClass::kClean);
}

TEST(Simulation, AttackCampaignsAudited) {
  SimulationConfig cfg = quick_config();
  cfg.accounts = 0;
  cfg.attacks.evade = true;
  cfg.attacks.collide = true;
  cfg.attacks.corpus_db = 5;
  cfg.attacks.corpus_benign = 15;
  cfg.attacks.image_size = 128;
  const SimulationMetrics m = run_simulation(cfg);
  ASSERT_EQ(m.attacks.size(), 2u);
  for (const AttackSummary& s : m.attacks) {
    EXPECT_EQ(s.attempts, 20u);
    EXPECT_EQ(s.budget_violations, 0u);
    EXPECT_DOUBLE_EQ(s.success_rate, static_cast<double>(s.successes) / 20.0);
  }
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o;
  std::ostringstream e;
  const int code = cssim::cli::run(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

TEST(Cli, ExitCodes) {
  std::string out;
  std::string err;
  EXPECT_EQ(cli({}, &out, &err), cli::kExitUsage);
  EXPECT_EQ(cli({"run"}, &out, &err), cli::kExitUsage);
  EXPECT_TRUE(out.empty());
  EXPECT_NE(err.find("cssim"), std::string::npos);
  EXPECT_EQ(cli({"run", "--config", "/nonexistent.json"}, &out, &err), cli::kExitUsage);
  EXPECT_EQ(cli({"attack", "melt", "--config", "x"}, &out, &err), cli::kExitUsage);
  EXPECT_EQ(cli({"print-schema", "nope"}, &out, &err), cli::kExitUsage);
  EXPECT_EQ(cli({"--help"}, &out, &err), cli::kExitOk);
  EXPECT_EQ(cli({"print-schema", "metrics"}, &out, &err), cli::kExitOk);
  EXPECT_EQ(out, metrics_schema());
}

TEST(Cli, GenCorpusCountsAndDeterminism) {
  const fs::path empty = scratch("gen0");
  ASSERT_EQ(cli({"gen-corpus", "--db", "0", "--benign", "0", "--out", empty.string(), "--quiet"}), 0);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(empty)) files.push_back(e.path().filename());
  ASSERT_EQ(files.size(), 1u);
  EXPECT_EQ(files[0], "manifest.json");

  const fs::path a = scratch("gen_a");
  const fs::path b = scratch("gen_b");
  for (const fs::path& d : {a, b}) {
    ASSERT_EQ(cli({"gen-corpus", "--seed", "17", "--db", "100", "--benign", "900", "--image-size", "16", "--out",
                   d.string(), "--quiet"}),
              0);
  }
  std::size_t pgms = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    if (e.path().extension() == ".pgm") ++pgms;
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
  }
  EXPECT_EQ(pgms, 1000u);
  const Corpus c = load_corpus(a);
  EXPECT_EQ(c.with_role(ImageRole::kDb).size(), 100u);
  EXPECT_EQ(c.with_role(ImageRole::kBenign).size(), 900u);
}

TEST(Cli, RunFromGeneratedCorpus) {
  const fs::path dir = scratch("run_dir");
  ASSERT_EQ(cli({"gen-corpus", "--seed", "3", "--db", "10", "--benign", "30", "--image-size", "32", "--out",
                 (dir / "imgs").string(), "--quiet"}),
            0);
  std::ofstream(dir / "c.json") << R"({"version": 1, "threshold": 3, "accounts": 4, "uploads_per_account": 30,
    "group_profile": "test31", "corpus": {"dir": "imgs"}})";
  std::string out1;
  std::string out2;
  ASSERT_EQ(cli({"run", "--config", (dir / "c.json").string(), "--quiet"}, &out1), 0);
  ASSERT_EQ(cli({"run", "--config", (dir / "c.json").string(), "--quiet", "--jobs", "3"}, &out2), 0);
  EXPECT_EQ(out1, out2);
  const auto doc = nlohmann::json::parse(out1);
  EXPECT_EQ(doc["vouchers"]["uploads"], 120);
  EXPECT_EQ(doc["config"]["corpus"]["dir"], (dir / "imgs").generic_string());
}

}  // namespace
}  // namespace cssim
