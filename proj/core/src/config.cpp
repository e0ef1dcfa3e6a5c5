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

#include "cssim/config.hpp"

#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "cssim/error.hpp"
#include "cssim/field_math.hpp"
#include "cssim/group.hpp"

namespace cssim {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok |= key == a;
    if (!ok) throw ConfigError("unknown key '" + where + key + "'");
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void read_bool(const json& obj, const char* key, bool& out, const std::string& where) {
  if (const json* v = find(obj, key)) {
    if (!v->is_boolean()) throw ConfigError("'" + where + key + "' must be a boolean");
    out = v->get<bool>();
  }
}

void read_u64(const json& obj, const char* key, uint64_t& out, const std::string& where) {
  if (const json* v = find(obj, key)) {
    if (!v->is_number_unsigned()) throw ConfigError("'" + where + key + "' must be a non-negative integer");
    out = v->get<uint64_t>();
  }
}

void read_int(const json& obj, const char* key, int& out, const std::string& where) {
  if (const json* v = find(obj, key)) {
    if (!v->is_number_integer()) throw ConfigError("'" + where + key + "' must be an integer");
    const auto x = v->get<int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
      throw ConfigError("'" + where + key + "' is out of range");
    }
    out = static_cast<int>(x);
  }
}

void read_double(const json& obj, const char* key, double& out, const std::string& where) {
  if (const json* v = find(obj, key)) {
    if (!v->is_number()) throw ConfigError("'" + where + key + "' must be a number");
    out = v->get<double>();
  }
}

void read_string(const json& obj, const char* key, std::string& out, const std::string& where) {
  if (const json* v = find(obj, key)) {
    if (!v->is_string()) throw ConfigError("'" + where + key + "' must be a string");
    out = v->get<std::string>();
  }
}

void read_path(const json& obj, const char* key, std::optional<std::filesystem::path>& out,
               const std::filesystem::path& base_dir, const std::string& where) {
  if (const json* v = find(obj, key)) {
    if (v->is_null()) {
      out.reset();
      return;
    }
    if (!v->is_string()) throw ConfigError("'" + where + key + "' must be a string");
    std::filesystem::path p = v->get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    out = p;
  }
}

const json& object_at(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_object()) throw ConfigError("'" + where + key + "' must be an object");
  return v;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

bool is_rate(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

uint64_t field_profile_modulus(const std::string& name) {
  if (name == "test17") return kPrime17;
  if (name == "test97") return kPrime97;
  if (name == "test257") return kPrime257;
  if (name == "run61") return kPrime61;
  throw ConfigError("unknown field profile '" + name + "'");
}

uint64_t SimulationConfig::share_modulus() const { return field_profile_modulus(field_profile); }

void validate(const SimulationConfig& c) {
  const uint64_t p = field_profile_modulus(c.field_profile);
  try {
    (void)Group::by_name(c.group_profile);
  } catch (const DomainError&) {
    throw ConfigError("unknown group profile '" + c.group_profile + "'");
  }
  require(c.threshold >= 1, "threshold must be at least 1");
  require(static_cast<uint64_t>(c.threshold) < p, "threshold must be below the field size");
  require(is_rate(c.synthetic_rate), "synthetic_rate must lie in [0, 1]");
  require(c.accounts >= 0, "accounts must be non-negative");
  require(c.uploads_per_account >= 0, "uploads_per_account must be non-negative");
  require(static_cast<uint64_t>(c.uploads_per_account) < p,
          "uploads_per_account exceeds the share indices the field offers");
  require(c.db_size >= 0 && c.benign_size >= 0, "corpus sizes must be non-negative");
  require(c.image_size >= 8, "image_size must be at least 8");
  require(c.table_load > 0.0 && c.table_load <= 0.5, "table_load must lie in (0, 0.5]");
  require(is_rate(c.heavy_fraction) && is_rate(c.light_fraction) &&
              c.heavy_fraction + c.light_fraction <= 1.0,
          "population fractions must lie in [0, 1] and sum to at most 1");
  require(is_rate(c.heavy_db_rate) && is_rate(c.light_db_rate), "population db rates must lie in [0, 1]");
  require(c.jobs >= 1 && c.jobs <= 256, "jobs must lie in [1, 256]");
  if (!c.corpus_dir && c.accounts > 0 && c.uploads_per_account > 0) {
    const bool db_needed = (c.heavy_fraction > 0 && c.heavy_db_rate > 0) ||
                           (c.light_fraction > 0 && c.light_db_rate > 0);
    require(!db_needed || c.db_size > 0, "database uploads configured but db_size is 0");
    const bool benign_needed = c.heavy_db_rate < 1.0 || c.light_db_rate < 1.0 ||
                               c.heavy_fraction + c.light_fraction < 1.0;
    require(!benign_needed || c.benign_size > 0, "benign uploads configured but benign_size is 0");
  }
  const AttackConfig& a = c.attacks;
  require(a.corpus_db >= 0 && a.corpus_benign >= 0, "attacks corpus sizes must be non-negative");
  require(a.image_size >= 8, "attacks.image_size must be at least 8");
  require(is_rate(a.edit_fraction), "attacks.edit_fraction must lie in [0, 1]");
  require(a.max_delta >= 0 && a.max_delta <= 255, "attacks.max_delta must lie in [0, 255]");
}

SimulationConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  require(doc.is_object(), "config must be a JSON object");
  reject_unknown(doc,
                 {"version", "seed", "field_profile", "group_profile", "threshold", "synthetic_rate",
                  "accounts", "uploads_per_account", "table_load", "jobs", "corpus", "population",
                  "attacks"},
                 "");
  const json* version = find(doc, "version");
  require(version != nullptr, "missing 'version'");
  require(version->is_number_integer() && version->get<int64_t>() == kConfigVersion,
          "unsupported config version (expected " + std::to_string(kConfigVersion) + ")");

  SimulationConfig c;
  read_u64(doc, "seed", c.seed, "");
  read_string(doc, "field_profile", c.field_profile, "");
  read_string(doc, "group_profile", c.group_profile, "");
  read_int(doc, "threshold", c.threshold, "");
  read_double(doc, "synthetic_rate", c.synthetic_rate, "");
  read_int(doc, "accounts", c.accounts, "");
  read_int(doc, "uploads_per_account", c.uploads_per_account, "");
  read_double(doc, "table_load", c.table_load, "");
  read_int(doc, "jobs", c.jobs, "");

  if (doc.contains("corpus")) {
    const json& o = object_at(doc, "corpus", "");
    reject_unknown(o, {"db_size", "benign_size", "image_size", "dir"}, "corpus.");
    read_int(o, "db_size", c.db_size, "corpus.");
    read_int(o, "benign_size", c.benign_size, "corpus.");
    read_int(o, "image_size", c.image_size, "corpus.");
    read_path(o, "dir", c.corpus_dir, base_dir, "corpus.");
  }
  if (doc.contains("population")) {
    const json& o = object_at(doc, "population", "");
    reject_unknown(o, {"heavy_fraction", "heavy_db_rate", "light_fraction", "light_db_rate"}, "population.");
    read_double(o, "heavy_fraction", c.heavy_fraction, "population.");
    read_double(o, "heavy_db_rate", c.heavy_db_rate, "population.");
    read_double(o, "light_fraction", c.light_fraction, "population.");
    read_double(o, "light_db_rate", c.light_db_rate, "population.");
  }
  if (doc.contains("attacks")) {
    const json& o = object_at(doc, "attacks", "");
    reject_unknown(o,
                   {"evade", "collide", "corpus_db", "corpus_benign", "image_size", "edit_fraction",
                    "max_delta", "max_queries", "corpus_dir"},
                   "attacks.");
    AttackConfig& a = c.attacks;
    read_bool(o, "evade", a.evade, "attacks.");
    read_bool(o, "collide", a.collide, "attacks.");
    read_int(o, "corpus_db", a.corpus_db, "attacks.");
    read_int(o, "corpus_benign", a.corpus_benign, "attacks.");
    read_int(o, "image_size", a.image_size, "attacks.");
    read_double(o, "edit_fraction", a.edit_fraction, "attacks.");
    read_int(o, "max_delta", a.max_delta, "attacks.");
    read_u64(o, "max_queries", a.max_queries, "attacks.");
    read_path(o, "corpus_dir", a.corpus_dir, base_dir, "attacks.");
  }
  validate(c);
  return c;
}

SimulationConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc, base_dir);
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.parent_path());
}

json to_json(const SimulationConfig& c) {
  auto path_or_null = [](const std::optional<std::filesystem::path>& p) {
    return p ? json(p->generic_string()) : json(nullptr);
  };
  json corpus = {{"db_size", c.db_size}, {"benign_size", c.benign_size}, {"image_size", c.image_size},
                 {"dir", path_or_null(c.corpus_dir)}};
  json population = {{"heavy_fraction", c.heavy_fraction},
                     {"heavy_db_rate", c.heavy_db_rate},
                     {"light_fraction", c.light_fraction},
                     {"light_db_rate", c.light_db_rate}};
  const AttackConfig& a = c.attacks;
  json attacks = {{"evade", a.evade},
                  {"collide", a.collide},
                  {"corpus_db", a.corpus_db},
                  {"corpus_benign", a.corpus_benign},
                  {"image_size", a.image_size},
                  {"edit_fraction", a.edit_fraction},
                  {"max_delta", a.max_delta},
                  {"max_queries", a.max_queries},
                  {"corpus_dir", path_or_null(a.corpus_dir)}};
  return {{"version", kConfigVersion},
          {"seed", c.seed},
          {"field_profile", c.field_profile},
          {"group_profile", c.group_profile},
          {"threshold", c.threshold},
          {"synthetic_rate", c.synthetic_rate},
          {"accounts", c.accounts},
          {"uploads_per_account", c.uploads_per_account},
          {"table_load", c.table_load},
          {"jobs", c.jobs},
          {"corpus", corpus},
          {"population", population},
          {"attacks", attacks}};
}

}  // namespace cssim
