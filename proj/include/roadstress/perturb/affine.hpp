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

#include <cmath>

#include "roadstress/core/rng.hpp"
#include "roadstress/img/image.hpp"
#include "roadstress/img/warp.hpp"

namespace roadstress::perturb {

inline FloatImage scale(const FloatImage& img, double zoom) {
  if (zoom == 1.0) return img;
  return warp_affine(img, zoom, 0.0, 0.0);
}

enum class Direction { left, right, up, down };

// Integer shift with black fill.
inline FloatImage shift(const FloatImage& img, int dx, int dy) {
  const int w = img.width(), h = img.height();
  FloatImage out(w, h);
  for (int c = 0; c < 3; ++c) {
    const auto src = img.plane(c);
    auto dst = out.plane(c);
    for (int y = 0; y < h; ++y) {
      const int sy = y - dy;
      if (sy < 0 || sy >= h) continue;
      for (int x = 0; x < w; ++x) {
        const int sx = x - dx;
        if (sx >= 0 && sx < w)
          dst[static_cast<std::size_t>(y) * w + x] = src[static_cast<std::size_t>(sy) * w + sx];
      }
    }
  }
  return out;
}

// Shift by `fraction` of the axis along a seeded direction.
inline FloatImage translate(const FloatImage& img, double fraction, Rng& rng) {
  const auto dir = static_cast<Direction>(rng.below(4));
  const int sx = static_cast<int>(std::lround(fraction * img.width()));
  const int sy = static_cast<int>(std::lround(fraction * img.height()));
  switch (dir) {
    case Direction::left: return shift(img, -sx, 0);
    case Direction::right: return shift(img, sx, 0);
    case Direction::up: return shift(img, 0, -sy);
    case Direction::down: return shift(img, 0, sy);
  }
  return img;
}

}  // namespace roadstress::perturb
