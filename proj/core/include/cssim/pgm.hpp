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

// Binary portable graymap (P5, maxval 255) for synthetic corpora.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cssim/fingerprint.hpp"

namespace cssim {

std::vector<uint8_t> encode_pgm(const Image& img);
// Throws ParseError on a malformed header or short raster.
Image decode_pgm(std::span<const uint8_t> bytes);

void write_pgm(const std::filesystem::path& path, const Image& img);
Image read_pgm(const std::filesystem::path& path);

}  // namespace cssim
