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

#include "cssim/fingerprint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <utility>

#include "cssim/error.hpp"

namespace cssim {

Image::Image(int width, int height, std::vector<uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < kMinImageSide || height < kMinImageSide) {
    throw DomainError("image must be at least 8x8, got " + std::to_string(width) + "x" +
                      std::to_string(height));
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw DomainError("pixel count does not match width * height");
  }
}

Image Image::filled(int width, int height, uint8_t value) {
  if (width < 0 || height < 0) throw DomainError("negative image dimension");
  return Image(width, height,
               std::vector<uint8_t>(static_cast<std::size_t>(width) * height, value));
}

std::array<uint8_t, 8> Fingerprint::to_bytes() const {
  std::array<uint8_t, 8> out{};
  for (int i = 0; i < 8; ++i) out[i] = static_cast<uint8_t>(bits >> (56 - 8 * i));
  return out;
}

Fingerprint Fingerprint::from_bytes(const std::array<uint8_t, 8>& bytes) {
  uint64_t v = 0;
  for (const uint8_t b : bytes) v = (v << 8) | b;
  return {v};
}

std::string Fingerprint::to_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(bits));
  return buf;
}

std::vector<ResampleTap> resample_taps(int in, int out) {
  std::vector<ResampleTap> t(out);
  const double scale = static_cast<double>(in) / out;
  for (int d = 0; d < out; ++d) {
    double s = (d + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(in - 1));
    const int lo = static_cast<int>(std::floor(s));
    const int hi = std::min(lo + 1, in - 1);
    t[d] = {lo, hi, s - lo};
  }
  return t;
}

std::vector<uint8_t> resize_bilinear(const Image& img, int out_width, int out_height) {
  if (out_width <= 0 || out_height <= 0) throw DomainError("resize target must be positive");
  const auto tx = resample_taps(img.width(), out_width);
  const auto ty = resample_taps(img.height(), out_height);
  std::vector<uint8_t> out(static_cast<std::size_t>(out_width) * out_height);
  for (int y = 0; y < out_height; ++y) {
    const ResampleTap& ry = ty[y];
    for (int x = 0; x < out_width; ++x) {
      const ResampleTap& rx = tx[x];
      const double top = img.at(rx.lo, ry.lo) * (1.0 - rx.frac) + img.at(rx.hi, ry.lo) * rx.frac;
      const double bot = img.at(rx.lo, ry.hi) * (1.0 - rx.frac) + img.at(rx.hi, ry.hi) * rx.frac;
      const double v = top * (1.0 - ry.frac) + bot * ry.frac;
      out[static_cast<std::size_t>(y) * out_width + x] =
          static_cast<uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
    }
  }
  return out;
}

Fingerprint compute_fingerprint(const Image& img) {
  const auto small = resize_bilinear(img, kHashSide, kHashSide);
  std::array<uint64_t, kHashGrid * kHashGrid> block_sum{};
  uint64_t total = 0;
  for (int y = 0; y < kHashSide; ++y) {
    for (int x = 0; x < kHashSide; ++x) {
      const uint8_t v = small[static_cast<std::size_t>(y) * kHashSide + x];
      block_sum[(y / kHashBlockSide) * kHashGrid + x / kHashBlockSide] += v;
      total += v;
    }
  }
  // block mean > global mean  <=>  sum_b / 64 > total / 4096  <=>  64 * sum_b > total.
  constexpr uint64_t kBlocksPerImage = kHashGrid * kHashGrid;
  uint64_t bits = 0;
  for (std::size_t b = 0; b < block_sum.size(); ++b) {
    bits <<= 1;
    if (block_sum[b] * kBlocksPerImage > total) bits |= 1;
  }
  return {bits};
}

VisualDerivative make_visual_derivative(const Image& img) {
  const auto small = resize_bilinear(img, kDerivativeSide, kDerivativeSide);
  VisualDerivative d;
  std::copy(small.begin(), small.end(), d.pixels.begin());
  return d;
}

int hamming(const Fingerprint& a, const Fingerprint& b) { return std::popcount(a.bits ^ b.bits); }

}  // namespace cssim
