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

#include "cssim/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "cssim/error.hpp"
#include "cssim/pgm.hpp"
#include "cssim/rng.hpp"

namespace cssim {

namespace {

constexpr int kManifestVersion = 1;

std::string image_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "img_%05zu.pgm", i);
  return buf;
}

double value_noise(const std::vector<double>& grid, int cells, double u, double v) {
  // u, v in [0, 1]; grid has (cells + 1)^2 control values.
  const double gx = u * cells;
  const double gy = v * cells;
  const int x0 = std::min(static_cast<int>(gx), cells - 1);
  const int y0 = std::min(static_cast<int>(gy), cells - 1);
  const double fx = gx - x0;
  const double fy = gy - y0;
  // Smoothstep keeps the field C1 across cell borders.
  const double sx = fx * fx * (3 - 2 * fx);
  const double sy = fy * fy * (3 - 2 * fy);
  const int stride = cells + 1;
  const double a = grid[y0 * stride + x0], b = grid[y0 * stride + x0 + 1];
  const double c = grid[(y0 + 1) * stride + x0], d = grid[(y0 + 1) * stride + x0 + 1];
  return (a * (1 - sx) + b * sx) * (1 - sy) + (c * (1 - sx) + d * sx) * sy;
}

}  // namespace

const char* to_string(ImageRole role) { return role == ImageRole::kDb ? "db" : "benign"; }

std::vector<const CorpusImage*> Corpus::with_role(ImageRole role) const {
  std::vector<const CorpusImage*> out;
  for (const auto& img : images) {
    if (img.role == role) out.push_back(&img);
  }
  return out;
}

Image generate_image(uint64_t seed, int size) {
  Rng rng(seed);
  const int cells = static_cast<int>(rng.uniform_in(2, 6));
  std::vector<double> grid((cells + 1) * (cells + 1));
  const double lo = static_cast<double>(rng.uniform_in(20, 120));
  const double span = static_cast<double>(rng.uniform_in(40, 130));
  for (auto& g : grid) g = lo + rng.unit() * span;
  const int grain = static_cast<int>(rng.uniform_in(0, 24));

  struct Shape {
    int kind;  // 0 rectangle, 1 ellipse
    double cx, cy, rx, ry, value;
  };
  std::vector<Shape> shapes(rng.uniform_in(1, 4));
  for (auto& s : shapes) {
    s.kind = static_cast<int>(rng.uniform(2));
    s.cx = rng.unit();
    s.cy = rng.unit();
    s.rx = 0.05 + 0.25 * rng.unit();
    s.ry = 0.05 + 0.25 * rng.unit();
    s.value = static_cast<double>(rng.uniform(256));
  }

  std::vector<uint8_t> px(static_cast<std::size_t>(size) * size);
  for (int y = 0; y < size; ++y) {
    const double v = (y + 0.5) / size;
    for (int x = 0; x < size; ++x) {
      const double u = (x + 0.5) / size;
      double val = value_noise(grid, cells, u, v);
      for (const auto& s : shapes) {
        const double dx = (u - s.cx) / s.rx;
        const double dy = (v - s.cy) / s.ry;
        const bool inside = s.kind == 0 ? (std::abs(dx) <= 1 && std::abs(dy) <= 1) : (dx * dx + dy * dy <= 1);
        if (inside) val = 0.5 * val + 0.5 * s.value;
      }
      if (grain > 0) val += static_cast<double>(rng.uniform(2 * grain + 1)) - grain;
      px[static_cast<std::size_t>(y) * size + x] =
          static_cast<uint8_t>(std::clamp(std::lround(val), 0L, 255L));
    }
  }
  return Image(size, size, std::move(px));
}

Corpus generate_corpus(uint64_t seed, int db_count, int benign_count, int size) {
  if (db_count < 0 || benign_count < 0) throw DomainError("corpus counts must be non-negative");
  Corpus corpus;
  corpus.seed = seed;
  std::set<uint64_t> seen;
  uint64_t stream = 0;
  const int total = db_count + benign_count;
  for (int i = 0; i < total; ++i) {
    while (true) {
      Image img = generate_image(derive_seed(seed, stream++), size);
      const Fingerprint fp = compute_fingerprint(img);
      if (!seen.insert(fp.bits).second) continue;
      corpus.images.push_back({image_name(static_cast<std::size_t>(i)),
                               i < db_count ? ImageRole::kDb : ImageRole::kBenign, std::move(img), fp});
      break;
    }
  }
  return corpus;
}

void write_corpus(const std::filesystem::path& dir, const Corpus& corpus) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["version"] = kManifestVersion;
  manifest["seed"] = corpus.seed;
  auto& list = manifest["images"];
  list = nlohmann::json::array();
  for (const auto& ci : corpus.images) {
    write_pgm(dir / ci.name, ci.image);
    list.push_back({{"file", ci.name}, {"role", to_string(ci.role)}, {"fingerprint", ci.fingerprint.to_hex()}});
  }
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw Error("cannot write manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

Corpus load_corpus(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json", std::ios::binary);
  if (!in) throw Error("no manifest.json in " + dir.string());
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("corpus manifest is not valid JSON: ") + e.what());
  }
  if (manifest.value("version", 0) != kManifestVersion) throw Error("unsupported corpus manifest version");
  Corpus corpus;
  corpus.seed = manifest.value("seed", uint64_t{0});
  for (const auto& entry : manifest.at("images")) {
    const std::string name = entry.at("file").get<std::string>();
    if (name.find('/') != std::string::npos) throw Error("manifest entry escapes the corpus directory");
    const std::string role = entry.at("role").get<std::string>();
    if (role != "db" && role != "benign") throw Error("unknown image role '" + role + "'");
    Image img = read_pgm(dir / name);
    const Fingerprint fp = compute_fingerprint(img);
    corpus.images.push_back({name, role == "db" ? ImageRole::kDb : ImageRole::kBenign, std::move(img), fp});
  }
  return corpus;
}

}  // namespace cssim
