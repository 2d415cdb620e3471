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

#include "roadstress/core/rng.hpp"
#include "roadstress/img/convolve.hpp"
#include "roadstress/img/image.hpp"
#include "roadstress/img/warp.hpp"
#include "roadstress/perturb/blur.hpp"

namespace roadstress::perturb {

// Displacement field: unit-uniform noise per axis, Gaussian-smoothed with
// `smoothing_sigma`, rescaled so the largest displacement is `alpha` px.
// Sampling is bilinear with clamp-to-edge coordinates.
inline FloatImage elastic(const FloatImage& img, double alpha, double smoothing_sigma, Rng& rng) {
  const int w = img.width(), h = img.height();
  const std::size_t n = img.pixel_count();
  std::vector<float> dx(n), dy(n);
  for (float& v : dx) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  for (float& v : dy) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  if (alpha == 0.0) return img;

  const double sigma = std::min(smoothing_sigma, max_fitting_radius(img) / 3.0);
  const auto taps = gaussian_taps(sigma);
  std::vector<float> sx(n), sy(n);
  if (taps.size() > 1) {
    convolve_separable_plane(dx, sx, w, h, taps, taps);
    convolve_separable_plane(dy, sy, w, h, taps, taps);
  } else {
    sx = dx;
    sy = dy;
  }
  float peak = 0.0f;
  for (std::size_t i = 0; i < n; ++i) peak = std::max({peak, std::fabs(sx[i]), std::fabs(sy[i])});
  if (peak == 0.0f) return img;
  const double gain = alpha / peak;

  FloatImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const double px = std::clamp(x + gain * sx[i], 0.0, static_cast<double>(w - 1));
      const double py = std::clamp(y + gain * sy[i], 0.0, static_cast<double>(h - 1));
      for (int c = 0; c < 3; ++c) {
        float v = 0.0f;
        roadstress::detail::sample_bilinear(img.plane(c), w, h, px, py, v);
        out.plane(c)[i] = v;
      }
    }
  return out;
}

// Blocks of side `block` anchored at the top-left corner; edge blocks are
// averaged over the pixels they actually cover.
inline void pixelate(FloatImage& img, int block) {
  if (block <= 1) return;
  const int w = img.width(), h = img.height();
  for (int c = 0; c < 3; ++c) {
    auto p = img.plane(c);
    for (int by = 0; by < h; by += block)
      for (int bx = 0; bx < w; bx += block) {
        const int ey = std::min(by + block, h), ex = std::min(bx + block, w);
        double sum = 0.0;
        for (int y = by; y < ey; ++y)
          for (int x = bx; x < ex; ++x) sum += p[static_cast<std::size_t>(y) * w + x];
        const float mean = static_cast<float>(sum / ((ey - by) * (ex - bx)));
        for (int y = by; y < ey; ++y)
          for (int x = bx; x < ex; ++x) p[static_cast<std::size_t>(y) * w + x] = mean;
      }
  }
}

struct PixelRect {
  int x, y, width, height;
};

// Two half-width, half-height regions (25% of the area each) at seeded
// positions; each becomes (1 - alpha) * itself + alpha * the other.
inline void sample_pairing(FloatImage& img, double alpha, Rng& rng) {
  const int w = img.width(), h = img.height();
  const int rw = (w + 1) / 2, rh = (h + 1) / 2;
  const PixelRect a{static_cast<int>(rng.between(0, w - rw)), static_cast<int>(rng.between(0, h - rh)), rw, rh};
  const PixelRect b{static_cast<int>(rng.between(0, w - rw)), static_cast<int>(rng.between(0, h - rh)), rw, rh};
  if (alpha == 0.0) return;
  const FloatImage original = img;
  const float keep = static_cast<float>(1.0 - alpha), mix = static_cast<float>(alpha);
  auto blend = [&](const PixelRect& dst, const PixelRect& src) {
    for (int c = 0; c < 3; ++c) {
      auto out = img.plane(c);
      const auto in = original.plane(c);
      for (int y = 0; y < rh; ++y)
        for (int x = 0; x < rw; ++x) {
          const std::size_t di = static_cast<std::size_t>(dst.y + y) * w + dst.x + x;
          const std::size_t si = static_cast<std::size_t>(src.y + y) * w + src.x + x;
          out[di] = keep * in[di] + mix * in[si];
        }
    }
  };
  blend(a, b);
  blend(b, a);
}

// Unsharp mask: (1 + e) * img - e * G_1(img), i.e. convolution with
// identity + e * (identity - Gaussian(sigma = 1)).
inline FloatImage sharpen(const FloatImage& img, double strength) {
  if (strength == 0.0) return img;
  const FloatImage blurred = gaussian_blur(img, std::min(1.0, max_fitting_radius(img) / 3.0));
  FloatImage out = img;
  const float e = static_cast<float>(strength);
  auto dst = out.samples();
  const auto bl = blurred.samples();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = (1.0f + e) * dst[i] - e * bl[i];
  return out;
}

}  // namespace roadstress::perturb
