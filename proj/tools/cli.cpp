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

#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>

#include "cssim/config.hpp"
#include "cssim/corpus.hpp"
#include "cssim/error.hpp"
#include "cssim/simulation.hpp"

namespace cssim::cli {

namespace {

struct Options {
  std::string config;
  std::optional<uint64_t> seed;
  std::string out;
  bool quiet = false;
  std::optional<int> jobs;
  std::optional<int> db;
  std::optional<int> benign;
  std::optional<int> image_size;
  std::string attack;
  std::string schema = "metrics";
};

class Usage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SimulationConfig load_or_default(const Options& o, bool required) {
  SimulationConfig cfg;
  if (!o.config.empty()) {
    cfg = load_config(o.config);
  } else if (required) {
    throw ConfigError("--config is required");
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.jobs) cfg.jobs = *o.jobs;
  return cfg;
}

SimulationConfig resolve_config(const Options& o, bool required) {
  SimulationConfig cfg = load_or_default(o, required);
  validate(cfg);
  return cfg;
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write '" + o.out + "'");
  f << text;
  if (!f) throw Error("write to '" + o.out + "' failed");
}

void note(const Options& o, std::ostream& err, const std::string& msg) {
  if (!o.quiet) err << "cssim: " << msg << "\n";
}

int cmd_gen_corpus(const Options& o, std::ostream& out, std::ostream& err) {
  SimulationConfig cfg = load_or_default(o, false);
  if (o.db) cfg.db_size = *o.db;
  if (o.benign) cfg.benign_size = *o.benign;
  if (o.image_size) cfg.image_size = *o.image_size;
  cfg.corpus_dir.reset();
  if (cfg.db_size < 0 || cfg.benign_size < 0) throw ConfigError("corpus sizes must be non-negative");
  if (cfg.image_size < kMinImageSide) throw ConfigError("image_size must be at least 8");
  if (o.out.empty()) throw ConfigError("gen-corpus needs --out DIR");
  const Corpus corpus = build_corpus(cfg);
  write_corpus(o.out, corpus);
  note(o, err, "wrote " + std::to_string(corpus.images.size()) + " images to " + o.out);
  const nlohmann::json summary = {{"dir", o.out},
                                  {"seed", corpus.seed},
                                  {"images", corpus.images.size()},
                                  {"db", corpus.with_role(ImageRole::kDb).size()},
                                  {"benign", corpus.with_role(ImageRole::kBenign).size()},
                                  {"image_size", cfg.image_size}};
  out << dump_json(summary);
  return kExitOk;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  const SimulationConfig cfg = resolve_config(o, true);
  const SimulationMetrics m = run_simulation(cfg);
  note(o, err,
       "run finished: " + std::to_string(m.reports) + " reports over " + std::to_string(m.accounts) + " accounts");
  emit(o, dump_json(metrics_to_json(m, cfg)), out);
  return kExitOk;
}

int cmd_attack(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.attack != "evade" && o.attack != "collide") throw Usage("unknown attack '" + o.attack + "'");
  const SimulationConfig cfg = resolve_config(o, true);
  const Corpus corpus = build_attack_corpus(cfg);
  const AttackSummary s = o.attack == "evade" ? run_evade_campaign(corpus, cfg, true)
                                              : run_collide_campaign(corpus, cfg, true);
  note(o, err, o.attack + ": " + std::to_string(s.successes) + "/" + std::to_string(s.attempts) + " succeeded");
  emit(o, dump_json(attack_to_json(s, cfg)), out);
  return kExitOk;
}

int cmd_print_schema(const Options& o, std::ostream& out) {
  const char* text = nullptr;
  if (o.schema == "metrics") text = metrics_schema();
  if (o.schema == "config") text = config_schema();
  if (o.schema == "attack") text = attack_schema();
  if (text == nullptr) throw Usage("unknown schema '" + o.schema + "'");
  emit(o, text, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Client-side scanning simulator"};
  app.name("cssim");
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Scenario config (JSON)");
    sub->add_option("--seed", o.seed, "Override the config seed");
    sub->add_option("--out", o.out, "Write output here instead of stdout");
    sub->add_flag("--quiet", o.quiet, "No diagnostics on stderr");
  };

  CLI::App* gen = app.add_subcommand("gen-corpus", "Write a synthetic PGM corpus and manifest");
  common(gen);
  gen->add_option("--db", o.db, "Database images")->check(CLI::NonNegativeNumber);
  gen->add_option("--benign", o.benign, "Benign images")->check(CLI::NonNegativeNumber);
  gen->add_option("--image-size", o.image_size, "Image side in pixels")->check(CLI::Range(8, 4096));

  CLI::App* run_cmd = app.add_subcommand("run", "Run a simulation and print metrics");
  common(run_cmd);
  run_cmd->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1, 256));

  CLI::App* attack = app.add_subcommand("attack", "Run an attack campaign (evade or collide)");
  common(attack);
  attack->add_option("name", o.attack, "Attack name")->required();
  attack->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1, 256));

  CLI::App* schema = app.add_subcommand("print-schema", "Print a shipped JSON schema");
  schema->add_option("which", o.schema, "metrics, config or attack");
  schema->add_option("--out", o.out, "Write output here instead of stdout");
  schema->add_flag("--quiet", o.quiet, "No diagnostics on stderr");

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("cssim");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, err, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen_corpus(o, out, err);
    if (run_cmd->parsed()) return cmd_run(o, out, err);
    if (attack->parsed()) return cmd_attack(o, out, err);
    return cmd_print_schema(o, out);
  } catch (const Usage& e) {
    err << "cssim: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "cssim: config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "cssim: error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace cssim::cli
