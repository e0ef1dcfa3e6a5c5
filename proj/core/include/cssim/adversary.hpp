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

// Attacks against the toy fingerprint and the detection pipeline:
//
//  * evade: black-box; only fingerprint queries plus the public 8x8 grid
//    layout. Pushes the pixels of the block that looks closest to the
//    global mean across it until any bit changes.
//  * collide: white-box inversion; edits the pixels the 64x64 resample
//    actually reads so that every block lands on the target side of the
//    global mean.
//  * detect-and-quit: upload until a detection signal, then stop.
//  * plant-evidence: push database-matching (or colliding) content through
//    a victim's account.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cssim/fingerprint.hpp"
#include "cssim/protocol.hpp"
#include "cssim/rng.hpp"

namespace cssim {

class Scenario;

inline constexpr double kDefaultEditFraction = 0.05;
inline constexpr int kDefaultMaxDelta = 32;
inline constexpr std::size_t kDefaultMaxQueries = 10'000;

struct AttackBudget {
  std::size_t max_edits = 0;    // distinct pixels that may change
  int max_delta = 0;            // per-pixel |new - original|
  std::size_t max_queries = 0;  // calls to compute_fingerprint

  // 5% of the pixels, +-32, 10^4 queries.
  static AttackBudget defaults_for(const Image& img);
  static AttackBudget scaled_for(const Image& img, double edit_fraction, int max_delta,
                                 std::size_t max_queries);
};

struct AttackOutcome {
  bool success = false;
  std::size_t edits = 0;
  std::size_t queries = 0;
  int hamming = 0;          // between the source and final fingerprints
  double distortion = 0.0;  // mean absolute pixel delta over the image
};

struct AttackResult {
  Image image;
  AttackOutcome outcome;
};

// Succeeds iff the final fingerprint differs from the source one. rng only
// orders pixels within a block.
AttackResult evade(const Image& img, const AttackBudget& budget, Rng& rng);

// Succeeds iff the final fingerprint equals target.
AttackResult collide(const Image& src, const Fingerprint& target, const AttackBudget& budget);

std::size_t pixels_changed(const Image& a, const Image& b);
int max_abs_delta(const Image& a, const Image& b);
double mean_abs_delta(const Image& a, const Image& b);

struct StrategyTrace {
  uint64_t account_id = 0;
  std::size_t uploads = 0;             // uploads actually performed
  std::size_t db_uploads = 0;          // of which database-matching content
  std::size_t matched_before_quit = 0;
  std::size_t matched_after_quit = 0;  // server-side count, audited
  std::size_t reports_before_quit = 0;
  std::size_t reports_after_quit = 0;
  bool quit = false;
  std::size_t quit_after_upload = 0;   // 1-based; 0 if never quit
  std::vector<DetectionReport> reports;
};

struct DetectAndQuitParams {
  std::size_t planned_uploads = 0;
  // Out-of-band detection signal after this upload (1-based). 0 disables it;
  // a report naming the account always counts as a signal.
  std::size_t signal_at_upload = 0;
  // Rounds the simulation keeps running (and sweeping) after the quit.
  std::size_t rounds_after_quit = 0;
};

// The adversary uploads database-matching images, one per round, with the
// server sweeping after every round. On the first detection signal it stops
// uploading for good.
StrategyTrace detect_and_quit_strategy(DeviceClient& client, Scenario& sim,
                                       const DetectAndQuitParams& params, Rng& rng);

enum class PlantSource {
  kDatabaseImages,   // the attacker uploads database images directly
  kCollidedBenign,   // benign-looking images collided onto database fingerprints
};

struct PlantParams {
  std::size_t planted = 0;
  std::size_t organic_benign = 0;  // victim's own uploads, interleaved
  PlantSource source = PlantSource::kDatabaseImages;
  int collide_image_size = 512;
  std::size_t cover_attempts = 32;  // per planted item, collided source only
};

struct PlantTrace {
  StrategyTrace trace;
  std::size_t collisions_attempted = 0;
  std::size_t collisions_succeeded = 0;
  // Planted images actually uploaded, parallel to their sequence numbers.
  std::vector<uint64_t> planted_sequences;
  std::vector<Image> planted_images;
};

// The attacker causes uploads on the victim's device; the victim never
// chose the content. Sweeps once at the end.
PlantTrace plant_evidence(DeviceClient& victim, Scenario& sim, const PlantParams& params, Rng& rng);

}  // namespace cssim
