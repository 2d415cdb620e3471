// Copyright 2026 The roadstress Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JPEG compression artifacts without entropy coding: 4:2:0 YCbCr, 8x8
// block DCT, quantize/dequantize with the baseline tables scaled by quality,
// inverse DCT, nearest-neighbour chroma upsampling.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "roadstress/img/image.hpp"

namespace roadstress::perturb {

inline constexpr std::array<int, 64> kLumaQuant{
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

inline constexpr std::array<int, 64> kChromaQuant{
    17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99,
    24, 26, 56, 99, 99, 99, 99, 99, 47, 66, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};

// IJG quality scaling.
inline std::array<int, 64> scaled_quant_table(const std::array<int, 64>& base, int quality) {
  quality = std::clamp(quality, 1, 100);
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<int, 64> out{};
  for (int i = 0; i < 64; ++i) out[i] = std::clamp((base[i] * scale + 50) / 100, 1, 255);
  return out;
}

namespace detail {

struct DctBasis {
  std::array<double, 64> c{};  // c[u*8 + x]
  DctBasis() {
    for (int u = 0; u < 8; ++u)
      for (int x = 0; x < 8; ++x)
        c[u * 8 + x] = (u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0)) *
                       std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
  }
};

// Quantizes one plane (values on the 0..255 scale) in place, block by block.
inline void quantize_plane(std::vector<double>& plane, int w, int h, const std::array<int, 64>& q) {
  static const DctBasis basis;
  const auto& c = basis.c;
  std::array<double, 64> block{}, tmp{}, coef{};
  for (int by = 0; by < h; by += 8) {
    for (int bx = 0; bx < w; bx += 8) {
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
          block[y * 8 + x] =
              plane[static_cast<std::size_t>(std::min(by + y, h - 1)) * w + std::min(bx + x, w - 1)] -
              128.0;
      // coef = C * block * C^T
      for (int u = 0; u < 8; ++u)
        for (int x = 0; x < 8; ++x) {
          double s = 0.0;
          for (int y = 0; y < 8; ++y) s += c[u * 8 + y] * block[y * 8 + x];
          tmp[u * 8 + x] = s;
        }
      for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v) {
          double s = 0.0;
          for (int x = 0; x < 8; ++x) s += tmp[u * 8 + x] * c[v * 8 + x];
          const double step = q[u * 8 + v];
          coef[u * 8 + v] = std::round(s / step) * step;
        }
      // block = C^T * coef * C
      for (int y = 0; y < 8; ++y)
        for (int v = 0; v < 8; ++v) {
          double s = 0.0;
          for (int u = 0; u < 8; ++u) s += c[u * 8 + y] * coef[u * 8 + v];
          tmp[y * 8 + v] = s;
        }
      for (int y = 0; y < 8 && by + y < h; ++y)
        for (int x = 0; x < 8 && bx + x < w; ++x) {
          double s = 0.0;
          for (int v = 0; v < 8; ++v) s += tmp[y * 8 + v] * c[v * 8 + x];
          plane[static_cast<std::size_t>(by + y) * w + bx + x] = s + 128.0;
        }
    }
  }
}

}  // namespace detail

inline void jpeg_artifacts(FloatImage& img, int quality) {
  const int w = img.width(), h = img.height();
  const int cw = (w + 1) / 2, ch = (h + 1) / 2;
  const std::size_t n = img.pixel_count();
  auto r = img.plane(0), g = img.plane(1), b = img.plane(2);

  std::vector<double> luma(n), cb_full(n), cr_full(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double R = r[i] * 255.0, G = g[i] * 255.0, B = b[i] * 255.0;
    luma[i] = 0.299 * R + 0.587 * G + 0.114 * B;
    cb_full[i] = -0.168736 * R - 0.331264 * G + 0.5 * B + 128.0;
    cr_full[i] = 0.5 * R - 0.418688 * G - 0.081312 * B + 128.0;
  }
  std::vector<double> cb(static_cast<std::size_t>(cw) * ch), cr(cb.size());
  for (int y = 0; y < ch; ++y)
    for (int x = 0; x < cw; ++x) {
      double sb = 0.0, sr = 0.0;
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          const std::size_t i =
              static_cast<std::size_t>(std::min(2 * y + dy, h - 1)) * w + std::min(2 * x + dx, w - 1);
          sb += cb_full[i];
          sr += cr_full[i];
        }
      cb[static_cast<std::size_t>(y) * cw + x] = sb / 4.0;
      cr[static_cast<std::size_t>(y) * cw + x] = sr / 4.0;
    }

  detail::quantize_plane(luma, w, h, scaled_quant_table(kLumaQuant, quality));
  const auto chroma_q = scaled_quant_table(kChromaQuant, quality);
  detail::quantize_plane(cb, cw, ch, chroma_q);
  detail::quantize_plane(cr, cw, ch, chroma_q);

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const std::size_t ci = static_cast<std::size_t>(y / 2) * cw + x / 2;
      const double Y = luma[i], Cb = cb[ci] - 128.0, Cr = cr[ci] - 128.0;
      r[i] = static_cast<float>((Y + 1.402 * Cr) / 255.0);
      g[i] = static_cast<float>((Y - 0.344136 * Cb - 0.714136 * Cr) / 255.0);
      b[i] = static_cast<float>((Y + 1.772 * Cb) / 255.0);
    }
}

}  // namespace roadstress::perturb
