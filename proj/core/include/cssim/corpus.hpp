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

// Synthetic image corpora: smooth value noise, per-pixel grain and a few
// filled shapes. No real imagery is ever used.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cssim/fingerprint.hpp"

namespace cssim {

enum class ImageRole { kDb, kBenign };

const char* to_string(ImageRole role);

struct CorpusImage {
  std::string name;
  ImageRole role;
  Image image;
  Fingerprint fingerprint;
};

struct Corpus {
  uint64_t seed = 0;
  std::vector<CorpusImage> images;  // db images first, then benign

  std::vector<const CorpusImage*> with_role(ImageRole role) const;
};

// Deterministic in (seed, size).
Image generate_image(uint64_t seed, int size);

// db_count + benign_count images with pairwise distinct fingerprints; an
// image whose fingerprint repeats is redrawn from the next sub-seed.
Corpus generate_corpus(uint64_t seed, int db_count, int benign_count, int size);

// Writes img_NNNNN.pgm files and manifest.json into dir (created if
// missing). Byte-identical for identical corpora.
void write_corpus(const std::filesystem::path& dir, const Corpus& corpus);
// Reads a directory produced by write_corpus. Throws Error on I/O or
// manifest problems.
Corpus load_corpus(const std::filesystem::path& dir);

}  // namespace cssim
