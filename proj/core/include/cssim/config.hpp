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

// Scenario configuration: a versioned JSON document. Every field has a
// default; unknown keys and out-of-range values are rejected with
// ConfigError before anything runs.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace cssim {

inline constexpr int kConfigVersion = 1;

struct AttackConfig {
  bool evade = false;
  bool collide = false;
  int corpus_db = 100;
  int corpus_benign = 900;
  int image_size = 512;
  double edit_fraction = 0.05;
  int max_delta = 32;
  uint64_t max_queries = 10'000;
  std::optional<std::filesystem::path> corpus_dir;  // load instead of generating
};

struct SimulationConfig {
  uint64_t seed = 1;
  std::string field_profile = "run61";
  std::string group_profile = "run63";
  int threshold = 10;
  double synthetic_rate = 0.05;
  int accounts = 50;
  int uploads_per_account = 200;
  int db_size = 100;
  int benign_size = 900;
  int image_size = 64;
  double table_load = 0.45;
  // Accounts [0, heavy) upload database content at heavy_db_rate, the next
  // light ones at light_db_rate, the rest never.
  double heavy_fraction = 0.2;
  double heavy_db_rate = 0.15;
  double light_fraction = 0.2;
  double light_db_rate = 0.05;
  int jobs = 1;
  std::optional<std::filesystem::path> corpus_dir;
  AttackConfig attacks;

  uint64_t share_modulus() const;
};

// Maps a field profile name (test17, test97, test257, run61) to its prime.
// Throws ConfigError for unknown names.
uint64_t field_profile_modulus(const std::string& name);

// Throws ConfigError on malformed documents, unknown keys, wrong types or
// invalid values. Relative corpus paths resolve against base_dir.
SimulationConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
SimulationConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});
SimulationConfig load_config(const std::filesystem::path& path);

// Cross-field checks; parse_config calls this too.
void validate(const SimulationConfig& cfg);

nlohmann::json to_json(const SimulationConfig& cfg);

}  // namespace cssim
