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
#include <utility>

#include "roadstress/core/rng.hpp"
#include "roadstress/img/color.hpp"
#include "roadstress/img/convolve.hpp"
#include "roadstress/img/image.hpp"
#include "roadstress/perturb/blur.hpp"

namespace roadstress::perturb {

// `passes` sweeps in raster order; each pixel swaps (all channels) with a
// uniformly chosen neighbour within `radius`, clamped to the raster. Every
// pass is therefore a permutation of pixels.
inline void frosted_glass(FloatImage& img, int radius, int passes, Rng& rng) {
  if (radius <= 0) return;
  const int w = img.width(), h = img.height();
  auto r = img.plane(0), g = img.plane(1), b = img.plane(2);
  for (int pass = 0; pass < passes; ++pass) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int nx = std::clamp(x + static_cast<int>(rng.between(-radius, radius)), 0, w - 1);
        const int ny = std::clamp(y + static_cast<int>(rng.between(-radius, radius)), 0, h - 1);
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
        std::swap(r[i], r[j]);
        std::swap(g[i], g[j]);
        std::swap(b[i], b[j]);
      }
    }
  }
}

inline void paint_disc(std::span<float> plane, int w, int h, double cx, double cy, double radius,
                       float value) {
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
  const int x1 = std::min(w - 1, static_cast<int>(std::ceil(cx + radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
  const int y1 = std::min(h - 1, static_cast<int>(std::ceil(cy + radius)));
  const double r2 = radius * radius;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - cx, dy = y - cy;
      if (dx * dx + dy * dy <= r2) plane[static_cast<std::size_t>(y) * w + x] = value;
    }
}

// White flakes of radius 1..3 px (density given per 240x320 frame) plus a
// motion-blurred copy of them, composited over the image by max.
inline void snow(FloatImage& img, double dots_per_frame, double streak_px, Rng& rng) {
  const int w = img.width(), h = img.height();
  const auto dots = static_cast<long long>(std::llround(dots_per_frame * w * h / 76800.0));
  if (dots <= 0) return;
  FloatImage layer(w, h);
  auto flakes = layer.plane(0);
  for (long long i = 0; i < dots; ++i) {
    const double cx = rng.uniform() * w;
    const double cy = rng.uniform() * h;
    const double radius = static_cast<double>(rng.between(1, 3));
    paint_disc(flakes, w, h, cx, cy, radius, 1.0f);
  }
  std::vector<float> streak(flakes.size());
  double length = std::min(streak_px, static_cast<double>(2 * max_fitting_radius(img) - 1));
  const Kernel kernel = Kernel::line(length, -60.0 * std::numbers::pi / 180.0);
  if (kernel.size() > 1) {
    convolve_plane(flakes, streak, w, h, kernel);
  } else {
    std::copy(flakes.begin(), flakes.end(), streak.begin());
  }
  for (int c = 0; c < 3; ++c) {
    auto p = img.plane(c);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::max({p[i], flakes[i], streak[i]});
  }
}

inline void fog(FloatImage& img, double blend) {
  const float f = static_cast<float>(blend);
  for (float& v : img.samples()) v = (1.0f - f) * v + f * 0.85f;
  scale_saturation(img, 1.0 - blend / 2.0);
}

inline void brightness(FloatImage& img, double offset) {
  const float b = static_cast<float>(offset);
  for (float& v : img.samples()) v = std::clamp(v + b, 0.0f, 1.0f);
}

inline void contrast(FloatImage& img, double gain) {
  const float c = static_cast<float>(gain);
  for (float& v : img.samples()) v = std::clamp((v - 0.5f) * c + 0.5f, 0.0f, 1.0f);
}

}  // namespace roadstress::perturb
