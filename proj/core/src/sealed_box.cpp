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

#include "cssim/sealed_box.hpp"

namespace cssim {

namespace {

constexpr uint64_t kMacTweak = 0xa54ff53a5f1d36f1ULL;
constexpr uint64_t kMacFinal = 0x510e527fade682d1ULL;

void apply_keystream(const Digest128& key, std::span<uint8_t> data) {
  for (std::size_t i = 0; i < data.size(); i += 8) {
    const uint64_t ks = mix64(mix64(i / 8, key.lo), key.hi);
    for (std::size_t b = 0; b < 8 && i + b < data.size(); ++b) {
      data[i + b] ^= static_cast<uint8_t>(ks >> (8 * b));
    }
  }
}

uint64_t mac(const Digest128& key, std::span<const uint8_t> data) {
  const uint64_t mk = mix64(mix64(key.hi, kMacTweak), key.lo);
  uint64_t h = mk;
  for (std::size_t i = 0; i < data.size(); i += 8) {
    uint64_t w = 0;
    for (std::size_t b = 0; b < 8 && i + b < data.size(); ++b) {
      w |= static_cast<uint64_t>(data[i + b]) << (8 * b);
    }
    h = mix64(h ^ w, mk);
  }
  return mix64(h ^ data.size(), mk ^ kMacFinal);
}

}  // namespace

std::vector<uint8_t> seal(const Digest128& key, std::span<const uint8_t> plaintext) {
  std::vector<uint8_t> out(plaintext.begin(), plaintext.end());
  apply_keystream(key, out);
  const uint64_t tag = mac(key, out);
  for (std::size_t b = 0; b < kSealTagSize; ++b) out.push_back(static_cast<uint8_t>(tag >> (8 * b)));
  return out;
}

std::optional<std::vector<uint8_t>> open_sealed(const Digest128& key, std::span<const uint8_t> sealed) {
  if (sealed.size() < kSealTagSize) return std::nullopt;
  const auto body = sealed.first(sealed.size() - kSealTagSize);
  uint64_t tag = 0;
  for (std::size_t b = 0; b < kSealTagSize; ++b) {
    tag |= static_cast<uint64_t>(sealed[body.size() + b]) << (8 * b);
  }
  if (mac(key, body) != tag) return std::nullopt;
  std::vector<uint8_t> out(body.begin(), body.end());
  apply_keystream(key, out);
  return out;
}

}  // namespace cssim
