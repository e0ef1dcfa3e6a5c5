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

#include "cssim/adversary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>

#include "cssim/corpus.hpp"
#include "cssim/error.hpp"
#include "cssim/simulation.hpp"

namespace cssim {

namespace {

// Tracks edits against the original so that no budget can be overrun.
class Canvas {
 public:
  Canvas(const Image& original, const AttackBudget& budget)
      : original_(original), current_(original), budget_(budget), edited_(original.size(), false) {}

  const Image& current() const { return current_; }
  std::size_t edits() const { return edits_; }
  bool edits_left() const { return edits_ < budget_.max_edits; }
  bool edited(int x, int y) const { return edited_[static_cast<std::size_t>(y) * current_.width() + x]; }

  // How far pixel (x, y) may still move in direction dir.
  int room(int x, int y, int dir) const {
    const std::size_t i = static_cast<std::size_t>(y) * current_.width() + x;
    const int orig = original_.pixels()[i];
    const int cur = current_.pixels()[i];
    return dir > 0 ? std::min(255, orig + budget_.max_delta) - cur : cur - std::max(0, orig - budget_.max_delta);
  }

  // Moves pixel (x, y) by up to `want` (signed) within the delta bound.
  // Returns the change actually applied; 0 when the pixel is pinned or a new
  // edit would exceed the edit budget.
  int push(int x, int y, int want) {
    const std::size_t i = static_cast<std::size_t>(y) * current_.width() + x;
    if (!edited_[i] && !edits_left()) return 0;
    const int orig = original_.pixels()[i];
    const int cur = current_.pixels()[i];
    const int lo = std::max(0, orig - budget_.max_delta);
    const int hi = std::min(255, orig + budget_.max_delta);
    const int next = std::clamp(cur + want, lo, hi);
    if (next == cur) return 0;
    current_.pixels()[i] = static_cast<uint8_t>(next);
    if (!edited_[i]) {
      edited_[i] = true;
      ++edits_;
    }
    return next - cur;
  }

 private:
  const Image& original_;
  Image current_;
  AttackBudget budget_;
  std::vector<bool> edited_;
  std::size_t edits_ = 0;
};

class QueryCounter {
 public:
  explicit QueryCounter(std::size_t limit) : limit_(limit) {}

  std::optional<Fingerprint> query(const Image& img) {
    if (used_ >= limit_) return std::nullopt;
    ++used_;
    return compute_fingerprint(img);
  }
  std::size_t used() const { return used_; }

 private:
  std::size_t limit_;
  std::size_t used_ = 0;
};

int block_bit(const Fingerprint& fp, int block) {
  return static_cast<int>((fp.bits >> (kHashGrid * kHashGrid - 1 - block)) & 1);
}

AttackResult finish(const Image& src, Canvas& canvas, const QueryCounter& q, bool success) {
  AttackResult r{canvas.current(), {}};
  r.outcome.success = success;
  r.outcome.edits = canvas.edits();
  r.outcome.queries = q.used();
  r.outcome.hamming = hamming(compute_fingerprint(src), compute_fingerprint(r.image));
  r.outcome.distortion = mean_abs_delta(src, r.image);
  return r;
}

// Source pixel range [begin, end) that covers block column/row `b` of an
// axis of length n, as the public grid layout implies.
std::pair<int, int> block_span(int n, int b) {
  return {b * n / kHashGrid, (b + 1) * n / kHashGrid};
}

// Per-axis white-box weights: how much each source coordinate contributes to
// the 64-sample resample, and into which block row/column. Coordinates that
// feed two different blocks are marked impure and left alone.
struct AxisWeight {
  double weight = 0.0;
  int block = -1;
  bool pure = true;
};

std::vector<AxisWeight> axis_weights(int n) {
  std::vector<AxisWeight> w(n);
  const auto taps = resample_taps(n, kHashSide);
  auto add = [&](int s, int d, double weight) {
    if (weight <= 0.0) return;
    const int block = d / kHashBlockSide;
    if (w[s].block >= 0 && w[s].block != block) w[s].pure = false;
    w[s].block = block;
    w[s].weight += weight;
  };
  for (int d = 0; d < kHashSide; ++d) {
    if (taps[d].lo == taps[d].hi) {
      add(taps[d].lo, d, 1.0);
    } else {
      add(taps[d].lo, d, 1.0 - taps[d].frac);
      add(taps[d].hi, d, taps[d].frac);
    }
  }
  return w;
}

struct WeightedPixel {
  int x;
  int y;
  double weight;
};

constexpr int kBlocks = kHashGrid * kHashGrid;

// Block sums of the 64x64 resample, in sample units.
std::array<double, kBlocks> block_sums(const Image& img) {
  const auto small = resize_bilinear(img, kHashSide, kHashSide);
  std::array<double, kBlocks> sums{};
  for (int y = 0; y < kHashSide; ++y) {
    for (int x = 0; x < kHashSide; ++x) {
      sums[(y / kHashBlockSide) * kHashGrid + x / kHashBlockSide] += small[static_cast<std::size_t>(y) * kHashSide + x];
    }
  }
  return sums;
}

// The moves available to shift one block sum in one direction, cheapest
// first: pixels already edited cost nothing, then the heaviest ones.
class Ladder {
 public:
  Ladder() = default;
  Ladder(const Canvas& canvas, const std::vector<WeightedPixel>& pixels, int dir) : dir_(dir) {
    for (const auto& p : pixels) {
      const int room = canvas.room(p.x, p.y, dir);
      if (room > 0) steps_.push_back({p.x, p.y, p.weight, room, !canvas.edited(p.x, p.y)});
    }
    std::stable_sort(steps_.begin(), steps_.end(), [](const Step& a, const Step& b) {
      if (a.fresh != b.fresh) return !a.fresh;
      return a.weight * a.room > b.weight * b.room;
    });
    double total = 0;
    std::size_t fresh = 0;
    for (const Step& s : steps_) {
      total += s.weight * s.room;
      fresh += s.fresh;
      cum_.push_back(total);
      fresh_.push_back(fresh);
    }
  }

  double capacity() const { return cum_.empty() ? 0.0 : cum_.back(); }

  // New edits needed to move the sum by `amount`; SIZE_MAX if impossible.
  std::size_t edits_for(double amount) const {
    if (amount <= 0) return 0;
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), amount - 1e-9);
    if (it == cum_.end()) return SIZE_MAX;
    return fresh_[it - cum_.begin()];
  }

  bool apply(Canvas& canvas, double amount) const {
    bool moved = false;
    for (const Step& s : steps_) {
      if (amount <= 1e-9) break;
      const int want = std::min(s.room, static_cast<int>(std::ceil(amount / s.weight - 1e-9)));
      const int got = canvas.push(s.x, s.y, dir_ * want);
      moved |= got != 0;
      amount -= std::abs(got) * s.weight;
    }
    return moved;
  }

 private:
  struct Step {
    int x;
    int y;
    double weight;
    int room;
    bool fresh;
  };
  int dir_ = 1;
  std::vector<Step> steps_;
  std::vector<double> cum_;
  std::vector<std::size_t> fresh_;
};

// Chooses per-block sum shifts d_b so that every block lands on its target
// side of the new average, scanning the shift of the average itself. Returns
// the cheapest plan within edit_budget, or nullopt.
std::optional<std::array<double, kBlocks>> plan_shifts(const std::array<double, kBlocks>& sums,
                                                      const Fingerprint& target,
                                                      const std::array<Ladder, kBlocks>& up,
                                                      const std::array<Ladder, kBlocks>& down,
                                                      std::size_t edit_budget) {
  constexpr double kGuard = 4.0;
  constexpr int kSteps = 512;
  const double mean = std::accumulate(sums.begin(), sums.end(), 0.0) / kBlocks;
  double lo_mu = 0;
  double hi_mu = 0;
  for (int b = 0; b < kBlocks; ++b) {
    lo_mu -= down[b].capacity() / kBlocks;
    hi_mu += up[b].capacity() / kBlocks;
  }

  std::optional<std::array<double, kBlocks>> best;
  std::size_t best_cost = SIZE_MAX;
  for (int k = 0; k <= kSteps; ++k) {
    const double mu = lo_mu + (hi_mu - lo_mu) * k / kSteps;
    std::array<double, kBlocks> lo{};
    std::array<double, kBlocks> hi{};
    std::array<double, kBlocks> d{};
    bool feasible = true;
    double sum = 0;
    for (int b = 0; b < kBlocks && feasible; ++b) {
      const double edge = mu + mean - sums[b];
      lo[b] = block_bit(target, b) ? edge + kGuard : -down[b].capacity();
      hi[b] = block_bit(target, b) ? up[b].capacity() : edge - kGuard;
      feasible = lo[b] <= hi[b];
      d[b] = std::clamp(0.0, lo[b], hi[b]);
      sum += d[b];
    }
    if (!feasible) continue;
    // Make the shifts average to mu, spending the widest headroom first.
    double diff = mu * kBlocks - sum;
    std::array<int, kBlocks> order{};
    std::iota(order.begin(), order.end(), 0);
    auto room = [&](int b) { return diff > 0 ? hi[b] - d[b] : d[b] - lo[b]; };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return room(a) > room(b); });
    for (const int b : order) {
      if (std::abs(diff) < 1e-9) break;
      const double step = std::min(room(b), std::abs(diff));
      d[b] += diff > 0 ? step : -step;
      diff += diff > 0 ? -step : step;
    }
    if (std::abs(diff) > 1e-6) continue;
    std::size_t cost = 0;
    for (int b = 0; b < kBlocks && cost != SIZE_MAX; ++b) {
      const std::size_t c = d[b] > 0 ? up[b].edits_for(d[b]) : down[b].edits_for(-d[b]);
      cost = c == SIZE_MAX ? SIZE_MAX : cost + c;
    }
    if (cost <= edit_budget && cost < best_cost) {
      best_cost = cost;
      best = d;
    }
  }
  return best;
}

}  // namespace

AttackBudget AttackBudget::defaults_for(const Image& img) {
  return scaled_for(img, kDefaultEditFraction, kDefaultMaxDelta, kDefaultMaxQueries);
}

AttackBudget AttackBudget::scaled_for(const Image& img, double edit_fraction, int max_delta,
                                      std::size_t max_queries) {
  if (edit_fraction < 0.0 || edit_fraction > 1.0 || max_delta < 0) {
    throw DomainError("attack budget out of range");
  }
  return {static_cast<std::size_t>(std::floor(edit_fraction * static_cast<double>(img.size()))),
          max_delta, max_queries};
}

std::size_t pixels_changed(const Image& a, const Image& b) {
  if (a.size() != b.size()) throw DomainError("images differ in size");
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a.pixels()[i] != b.pixels()[i];
  return n;
}

int max_abs_delta(const Image& a, const Image& b) {
  if (a.size() != b.size()) throw DomainError("images differ in size");
  int m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.pixels()[i] - b.pixels()[i]));
  return m;
}

double mean_abs_delta(const Image& a, const Image& b) {
  if (a.size() != b.size()) throw DomainError("images differ in size");
  uint64_t sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a.pixels()[i] - b.pixels()[i]);
  return static_cast<double>(sum) / static_cast<double>(a.size());
}

AttackResult evade(const Image& img, const AttackBudget& budget, Rng& rng) {
  Canvas canvas(img, budget);
  QueryCounter oracle(budget.max_queries);
  const auto original = oracle.query(img);
  if (!original || budget.max_edits == 0 || budget.max_delta == 0) {
    return finish(img, canvas, oracle, false);
  }

  // Rank blocks by how close their region mean sits to the image mean,
  // estimated from the pixels alone.
  const int w = img.width();
  const int h = img.height();
  const double global =
      std::accumulate(img.pixels().begin(), img.pixels().end(), 0.0) / static_cast<double>(img.size());
  std::array<double, kHashGrid * kHashGrid> gap{};
  for (int b = 0; b < kHashGrid * kHashGrid; ++b) {
    const auto [x0, x1] = block_span(w, b % kHashGrid);
    const auto [y0, y1] = block_span(h, b / kHashGrid);
    double sum = 0;
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) sum += img.at(x, y);
    }
    gap[b] = std::abs(sum / ((x1 - x0) * (y1 - y0)) - global);
  }
  std::array<int, kHashGrid * kHashGrid> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return gap[a] < gap[b]; });

  for (const int b : order) {
    if (!canvas.edits_left()) break;
    // A set bit means the block sits above the mean: push it down, and up
    // otherwise.
    const int dir = block_bit(*original, b) ? -1 : 1;
    const auto [x0, x1] = block_span(w, b % kHashGrid);
    const auto [y0, y1] = block_span(h, b / kHashGrid);
    std::vector<std::pair<int, int>> pixels;
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) pixels.emplace_back(x, y);
    }
    for (std::size_t i = pixels.size(); i > 1; --i) std::swap(pixels[i - 1], pixels[rng.uniform(i)]);

    const std::size_t batch = std::max<std::size_t>(1, pixels.size() / 16);
    for (std::size_t i = 0; i < pixels.size() && canvas.edits_left();) {
      bool changed = false;
      for (std::size_t k = 0; k < batch && i < pixels.size() && canvas.edits_left(); ++k, ++i) {
        changed |= canvas.push(pixels[i].first, pixels[i].second, dir * budget.max_delta) != 0;
      }
      if (!changed) continue;
      const auto fp = oracle.query(canvas.current());
      if (!fp) return finish(img, canvas, oracle, false);
      if (*fp != *original) return finish(img, canvas, oracle, true);
    }
  }
  return finish(img, canvas, oracle, false);
}

AttackResult collide(const Image& src, const Fingerprint& target, const AttackBudget& budget) {
  Canvas canvas(src, budget);
  QueryCounter oracle(budget.max_queries);

  const auto wx = axis_weights(src.width());
  const auto wy = axis_weights(src.height());
  std::array<std::vector<WeightedPixel>, kBlocks> by_block;
  for (int y = 0; y < src.height(); ++y) {
    if (wy[y].weight <= 0.0 || !wy[y].pure) continue;
    for (int x = 0; x < src.width(); ++x) {
      if (wx[x].weight <= 0.0 || !wx[x].pure) continue;
      by_block[wy[y].block * kHashGrid + wx[x].block].push_back({x, y, wx[x].weight * wy[y].weight});
    }
  }

  constexpr int kRounds = 8;
  for (int round = 0; round < kRounds; ++round) {
    const auto fp = oracle.query(canvas.current());
    if (!fp) break;
    if (*fp == target) return finish(src, canvas, oracle, true);

    std::array<Ladder, kBlocks> up;
    std::array<Ladder, kBlocks> down;
    for (int b = 0; b < kBlocks; ++b) {
      up[b] = Ladder(canvas, by_block[b], 1);
      down[b] = Ladder(canvas, by_block[b], -1);
    }
    const auto plan = plan_shifts(block_sums(canvas.current()), target, up, down,
                                  budget.max_edits - canvas.edits());
    if (!plan) break;
    bool progressed = false;
    for (int b = 0; b < kBlocks; ++b) {
      const double d = (*plan)[b];
      if (d == 0.0) continue;
      progressed |= (d > 0 ? up[b] : down[b]).apply(canvas, std::abs(d));
    }
    if (!progressed) break;
  }
  const auto fp = oracle.query(canvas.current());
  return finish(src, canvas, oracle, fp && *fp == target);
}

StrategyTrace detect_and_quit_strategy(DeviceClient& client, Scenario& sim,
                                       const DetectAndQuitParams& params, Rng& rng) {
  const auto db = sim.corpus().with_role(ImageRole::kDb);
  if (db.empty()) throw DomainError("detect-and-quit needs database images to upload");
  const uint64_t id = client.account_id();
  StrategyTrace trace;
  trace.account_id = id;

  auto my_reports = [&](std::vector<DetectionReport> reports) {
    std::size_t n = 0;
    for (auto& r : reports) {
      if (r.account_id != id) continue;
      ++n;
      trace.reports.push_back(std::move(r));
    }
    return n;
  };

  for (std::size_t i = 1; i <= params.planned_uploads; ++i) {
    const CorpusImage& img = *db[rng.uniform(db.size())];
    sim.upload(client, img, rng);
    ++trace.uploads;
    ++trace.db_uploads;
    const std::size_t detected = my_reports(sim.server().sweep());
    trace.reports_before_quit += detected;
    if (detected > 0 || i == params.signal_at_upload) {
      trace.quit = true;
      trace.quit_after_upload = i;
      break;
    }
  }

  const auto matched_now = [&] {
    const auto st = sim.server().account(id);
    return st ? st->matched.size() : std::size_t{0};
  };
  trace.matched_before_quit = matched_now();
  // The service keeps running; the adversary does not come back.
  for (std::size_t r = 0; r < params.rounds_after_quit; ++r) {
    trace.reports_after_quit += my_reports(sim.server().sweep());
  }
  trace.matched_after_quit = matched_now() - trace.matched_before_quit;
  return trace;
}

PlantTrace plant_evidence(DeviceClient& victim, Scenario& sim, const PlantParams& params, Rng& rng) {
  const auto db = sim.corpus().with_role(ImageRole::kDb);
  const auto benign = sim.corpus().with_role(ImageRole::kBenign);
  if (db.empty()) throw DomainError("planting needs database fingerprints");
  if (params.organic_benign > 0 && benign.empty()) throw DomainError("no benign images for organic uploads");

  PlantTrace out;
  out.trace.account_id = victim.account_id();

  // Interleave planted and organic uploads in a random order.
  std::vector<bool> planted(params.planted, true);
  planted.resize(params.planted + params.organic_benign, false);
  for (std::size_t i = planted.size(); i > 1; --i) {
    const std::size_t j = rng.uniform(i);
    const bool tmp = planted[i - 1];
    planted[i - 1] = planted[j];
    planted[j] = tmp;
  }

  std::size_t next_db = 0;
  for (const bool is_planted : planted) {
    if (!is_planted) {
      sim.upload(victim, *benign[rng.uniform(benign.size())], rng);
      ++out.trace.uploads;
      continue;
    }
    Image image = db[next_db++ % db.size()]->image;
    if (params.source == PlantSource::kCollidedBenign) {
      // Fresh covers until one lands on some database fingerprint; each is
      // aimed at the nearest one.
      for (std::size_t attempt = 0; attempt < params.cover_attempts; ++attempt) {
        const Image cover = generate_image(rng.next_u64(), params.collide_image_size);
        const Fingerprint fp = compute_fingerprint(cover);
        const CorpusImage* target = db.front();
        for (const CorpusImage* d : db) {
          if (hamming(d->fingerprint, fp) < hamming(target->fingerprint, fp)) target = d;
        }
        auto result = collide(cover, target->fingerprint, AttackBudget::defaults_for(cover));
        ++out.collisions_attempted;
        image = std::move(result.image);
        if (result.outcome.success) {
          ++out.collisions_succeeded;
          break;
        }
      }
    }
    const uint64_t seq = sim.upload(victim, image, rng).sequence;
    ++out.trace.uploads;
    ++out.trace.db_uploads;
    out.planted_sequences.push_back(seq);
    out.planted_images.push_back(std::move(image));
  }

  for (auto& r : sim.server().sweep()) {
    if (r.account_id == victim.account_id()) out.trace.reports.push_back(std::move(r));
  }
  out.trace.reports_before_quit = out.trace.reports.size();
  const auto st = sim.server().account(victim.account_id());
  out.trace.matched_before_quit = st ? st->matched.size() : 0;
  return out;
}

}  // namespace cssim
