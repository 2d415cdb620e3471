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

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "roadstress/core/error.hpp"
#include "roadstress/img/image.hpp"

namespace roadstress {

namespace detail {

// Bilinear sample of one plane at (sx, sy). Returns false when the point
// lies outside the source raster.
inline bool sample_bilinear(std::span<const float> plane, int w, int h, double sx, double sy,
                            float& out) {
  if (sx < 0.0 || sy < 0.0 || sx > w - 1 || sy > h - 1) return false;
  const int x0 = static_cast<int>(sx);
  const int y0 = static_cast<int>(sy);
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const float fx = static_cast<float>(sx - x0);
  const float fy = static_cast<float>(sy - y0);
  const float* r0 = plane.data() + static_cast<std::size_t>(y0) * w;
  const float* r1 = plane.data() + static_cast<std::size_t>(y1) * w;
  const float top = r0[x0] * (1.0f - fx) + r0[x1] * fx;
  const float bottom = r1[x0] * (1.0f - fx) + r1[x1] * fx;
  out = top * (1.0f - fy) + bottom * fy;
  return true;
}

}  // namespace detail

namespace detail {

// Precomputed bilinear taps along one axis for an axis-aligned warp.
struct AxisTaps {
  std::vector<int> i0, i1;
  std::vector<float> frac;
  std::vector<bool> valid;

  AxisTaps(int n, double scale, double shift) : i0(n), i1(n), frac(n), valid(n) {
    const double center = (n - 1) / 2.0;
    for (int i = 0; i < n; ++i) {
      const double s = center + (i - center - shift) / scale;
      valid[i] = s >= 0.0 && s <= n - 1;
      if (!valid[i]) continue;
      i0[i] = static_cast<int>(s);
      i1[i] = std::min(i0[i] + 1, n - 1);
      frac[i] = static_cast<float>(s - i0[i]);
    }
  }
};

}  // namespace detail

// Scales about the image center by `scale`, then translates by (dx, dy)
// pixels. Bilinear sampling; pixels mapping outside the source are black.
inline FloatImage warp_affine(const FloatImage& img, double scale, double dx, double dy) {
  require(scale > 0.0, Errc::invalid_argument, "warp scale must be > 0");
  const int w = img.width(), h = img.height();
  const detail::AxisTaps xs(w, scale, dx), ys(h, scale, dy);
  FloatImage out(w, h);
  for (int c = 0; c < 3; ++c) {
    const auto src = img.plane(c);
    auto dst = out.plane(c);
    for (int y = 0; y < h; ++y) {
      float* row = dst.data() + static_cast<std::size_t>(y) * w;
      if (!ys.valid[y]) continue;
      const float* r0 = src.data() + static_cast<std::size_t>(ys.i0[y]) * w;
      const float* r1 = src.data() + static_cast<std::size_t>(ys.i1[y]) * w;
      const float fy = ys.frac[y];
      for (int x = 0; x < w; ++x) {
        if (!xs.valid[x]) continue;
        const float fx = xs.frac[x];
        const float top = r0[xs.i0[x]] * (1.0f - fx) + r0[xs.i1[x]] * fx;
        const float bottom = r1[xs.i0[x]] * (1.0f - fx) + r1[xs.i1[x]] * fx;
        row[x] = top * (1.0f - fy) + bottom * fy;
      }
    }
  }
  return out;
}

// Center zoom by `factor` (>= 1 keeps every sample inside the source).
inline FloatImage zoom_resample(const FloatImage& img, double factor) {
  return warp_affine(img, factor, 0.0, 0.0);
}

namespace detail {

// Keys cubic convolution weights (a = -0.5) for fractional offset t in [0, 1).
inline void cubic_weights(double t, float out[4]) {
  const double a = -0.5;
  const double t2 = t * t, t3 = t2 * t;
  out[0] = static_cast<float>(a * t3 - 2.0 * a * t2 + a * t);
  out[1] = static_cast<float>((a + 2.0) * t3 - (a + 3.0) * t2 + 1.0);
  out[2] = static_cast<float>(-(a + 2.0) * t3 + (2.0 * a + 3.0) * t2 - a * t);
  out[3] = static_cast<float>(-a * t3 + a * t2);
}

}  // namespace detail

// Bicubic sample of all three planes at (sx, sy) with clamped borders.
inline void sample_bicubic(const FloatImage& img, double sx, double sy, float out[3]) {
  const int w = img.width(), h = img.height();
  const double fx = std::floor(sx), fy = std::floor(sy);
  float wx[4], wy[4];
  detail::cubic_weights(sx - fx, wx);
  detail::cubic_weights(sy - fy, wy);
  int xi[4], yi[4];
  for (int k = 0; k < 4; ++k) {
    xi[k] = std::clamp(static_cast<int>(fx) - 1 + k, 0, w - 1);
    yi[k] = std::clamp(static_cast<int>(fy) - 1 + k, 0, h - 1);
  }
  for (int c = 0; c < 3; ++c) {
    const float* p = img.plane(c).data();
    float acc = 0.0f;
    for (int j = 0; j < 4; ++j) {
      const float* row = p + static_cast<std::size_t>(yi[j]) * w;
      const float r = row[xi[0]] * wx[0] + row[xi[1]] * wx[1] + row[xi[2]] * wx[2] + row[xi[3]] * wx[3];
      acc += r * wy[j];
    }
    out[c] = acc;
  }
}

}  // namespace roadstress
