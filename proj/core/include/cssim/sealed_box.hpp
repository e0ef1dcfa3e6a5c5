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

// Encrypt-then-MAC built from the keyed mix. Deterministic and dependency
// free so that voucher bytes can be frozen as test vectors; it is NOT a
// secure cipher.
//
//   keystream word i = mix64(mix64(i, key.lo), key.hi), little-endian bytes
//   ciphertext       = plaintext XOR keystream
//   mac key          = mix64(key.hi, kMacTweak)
//   tag              = chained mix64 over 8-byte little-endian words of the
//                      ciphertext (zero padded), finalised with the length
//   sealed           = ciphertext || tag (8 bytes, little-endian)

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cssim/keyed_hash.hpp"

namespace cssim {

inline constexpr std::size_t kSealTagSize = 8;

std::vector<uint8_t> seal(const Digest128& key, std::span<const uint8_t> plaintext);

// nullopt when the input is shorter than a tag or the tag does not verify.
std::optional<std::vector<uint8_t>> open_sealed(const Digest128& key, std::span<const uint8_t> sealed);

}  // namespace cssim
