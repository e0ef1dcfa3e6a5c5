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

// Toy perceptual fingerprint (average-hash family) and the low-resolution
// visual derivative that rides along in every voucher.
//
// Fingerprint: bilinear downscale to 64x64, split into an 8x8 grid of 8x8
// blocks, bit = 1 iff the block mean is strictly greater than the global
// mean. Bits are taken row-major over the block grid with block (0,0) as the
// most significant bit. The hash is deliberately easy to perturb and to
// invert; downstream modules treat it as an opaque exact-match key.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace cssim {

inline constexpr int kMinImageSide = 8;
inline constexpr int kHashSide = 64;
inline constexpr int kHashGrid = 8;
inline constexpr int kHashBlockSide = kHashSide / kHashGrid;
inline constexpr int kDerivativeSide = 16;

// Row-major 8-bit grayscale raster, at least 8x8.
class Image {
 public:
  // Throws DomainError when a side is below 8 or the pixel count mismatches.
  Image(int width, int height, std::vector<uint8_t> pixels);
  static Image filled(int width, int height, uint8_t value);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }

  uint8_t at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  uint8_t& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

  const std::vector<uint8_t>& pixels() const { return pixels_; }
  std::vector<uint8_t>& pixels() { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_;
  int height_;
  std::vector<uint8_t> pixels_;
};

struct Fingerprint {
  uint64_t bits = 0;

  // Big-endian byte order.
  std::array<uint8_t, 8> to_bytes() const;
  static Fingerprint from_bytes(const std::array<uint8_t, 8>& bytes);
  std::string to_hex() const;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
  friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;
};

struct VisualDerivative {
  std::array<uint8_t, kDerivativeSide * kDerivativeSide> pixels{};

  friend bool operator==(const VisualDerivative&, const VisualDerivative&) = default;
};

// One output coordinate of a bilinear resample: interpolates source
// coordinates lo and hi with weight (1 - frac, frac).
struct ResampleTap {
  int lo;
  int hi;
  double frac;
};

std::vector<ResampleTap> resample_taps(int in, int out);

// Bilinear resample with pixel-centre alignment:
//   src = (dst + 0.5) * in / out - 0.5, clamped to the image,
// interpolated from the 2x2 neighbourhood and rounded half up.
std::vector<uint8_t> resize_bilinear(const Image& img, int out_width, int out_height);

Fingerprint compute_fingerprint(const Image& img);

VisualDerivative make_visual_derivative(const Image& img);

int hamming(const Fingerprint& a, const Fingerprint& b);

}  // namespace cssim
