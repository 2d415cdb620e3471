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

// Graphic patterns drawn over the image. Geometry generators are exposed so
// callers can replay exactly what was drawn for a given stream.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "roadstress/core/rng.hpp"
#include "roadstress/img/image.hpp"
#include "roadstress/perturb/weather.hpp"

namespace roadstress::perturb {

struct Disc {
  double cx, cy, radius;
};

struct Rect {
  int x, y, width, height;
  bool contains(int px, int py) const {
    return px >= x && px < x + width && py >= y && py < y + height;
  }
  bool overlaps(const Rect& o) const {
    return x < o.x + o.width && o.x < x + width && y < o.y + o.height && o.y < y + height;
  }
};

inline void paint_disc(FloatImage& img, const Disc& d, float value) {
  for (int c = 0; c < 3; ++c) paint_disc(img.plane(c), img.width(), img.height(), d.cx, d.cy, d.radius, value);
}

// Round brush stamped every half pixel from a to b.
inline void paint_stroke(FloatImage& img, double ax, double ay, double bx, double by, double half_width,
                         float value) {
  const double len = std::hypot(bx - ax, by - ay);
  const int steps = std::max(1, static_cast<int>(std::ceil(len * 2.0)));
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    paint_disc(img, {ax + t * (bx - ax), ay + t * (by - ay), half_width}, value);
  }
}

inline std::vector<Disc> splatter_blobs(int w, int h, int count, double min_radius_frac,
                                        double max_radius_frac, Rng& rng) {
  std::vector<Disc> blobs;
  const double side = std::min(w, h);
  for (int i = 0; i < count; ++i) {
    const double cx = rng.uniform() * w;
    const double cy = rng.uniform() * h;
    const double radius = rng.uniform(min_radius_frac, max_radius_frac) * side;
    blobs.push_back({cx, cy, radius});
  }
  return blobs;
}

inline void splatter(FloatImage& img, int count, double min_radius_frac, double max_radius_frac,
                     Rng& rng) {
  for (const auto& blob : splatter_blobs(img.width(), img.height(), count, min_radius_frac,
                                         max_radius_frac, rng))
    paint_disc(img, blob, 0.0f);
}

// Straight lines between two uniform points, drawn as black dots every
// `spacing` px.
inline void dotted_lines(FloatImage& img, int count, double spacing, double dot_radius, Rng& rng) {
  const int w = img.width(), h = img.height();
  spacing = std::max(1.0, spacing);
  for (int i = 0; i < count; ++i) {
    const double ax = rng.uniform() * w, ay = rng.uniform() * h;
    const double bx = rng.uniform() * w, by = rng.uniform() * h;
    const double len = std::hypot(bx - ax, by - ay);
    const int dots = static_cast<int>(len / spacing);
    for (int k = 0; k <= dots; ++k) {
      const double t = len > 0.0 ? k * spacing / len : 0.0;
      paint_disc(img, {ax + t * (bx - ax), ay + t * (by - ay), dot_radius}, 0.0f);
    }
  }
}

// Polyline advancing along a seeded heading, vertices alternating to either
// side by `amplitude_frac` of the short image side.
inline void zigzag(FloatImage& img, int count, int vertices, double amplitude_frac, double half_width,
                   Rng& rng) {
  const int w = img.width(), h = img.height();
  const double side = std::min(w, h);
  vertices = std::max(2, vertices);
  for (int i = 0; i < count; ++i) {
    double x = rng.uniform() * w, y = rng.uniform() * h;
    const double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double step = 0.6 * side / vertices;
    const double amp = amplitude_frac * side;
    const double fx = std::cos(heading), fy = std::sin(heading);
    const double nx = -fy, ny = fx;
    double px = x + nx * amp, py = y + ny * amp;
    for (int v = 1; v < vertices; ++v) {
      x += fx * step;
      y += fy * step;
      const double sign = (v % 2 == 0) ? 1.0 : -1.0;
      const double qx = x + sign * nx * amp, qy = y + sign * ny * amp;
      paint_stroke(img, px, py, qx, qy, half_width, 0.0f);
      px = qx;
      py = qy;
    }
  }
}

// Sobel gradients of luma, non-maximum suppression, then a double threshold
// where weak pixels 8-adjacent to a strong pixel are promoted in one pass.
inline std::vector<std::uint8_t> canny_edge_mask(const FloatImage& img, double low, double high) {
  const int w = img.width(), h = img.height();
  const auto y = luma(img);
  auto px = [&](int xx, int yy) {
    return y[static_cast<std::size_t>(std::clamp(yy, 0, h - 1)) * w + std::clamp(xx, 0, w - 1)];
  };
  std::vector<float> mag(y.size()), gxs(y.size()), gys(y.size());
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) {
      const float gx = (px(i + 1, j - 1) + 2 * px(i + 1, j) + px(i + 1, j + 1)) -
                       (px(i - 1, j - 1) + 2 * px(i - 1, j) + px(i - 1, j + 1));
      const float gy = (px(i - 1, j + 1) + 2 * px(i, j + 1) + px(i + 1, j + 1)) -
                       (px(i - 1, j - 1) + 2 * px(i, j - 1) + px(i + 1, j - 1));
      const std::size_t k = static_cast<std::size_t>(j) * w + i;
      gxs[k] = gx;
      gys[k] = gy;
      mag[k] = std::sqrt(gx * gx + gy * gy);
    }
  auto m = [&](int xx, int yy) {
    if (xx < 0 || yy < 0 || xx >= w || yy >= h) return 0.0f;
    return mag[static_cast<std::size_t>(yy) * w + xx];
  };
  // 0 = none, 1 = weak, 2 = strong
  std::vector<std::uint8_t> cls(y.size(), 0);
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * w + i;
      const float g = mag[k];
      if (g < low || g == 0.0f) continue;
      double angle = std::atan2(gys[k], gxs[k]) * 180.0 / std::numbers::pi;
      if (angle < 0) angle += 180.0;
      int ox, oy;
      if (angle < 22.5 || angle >= 157.5) { ox = 1; oy = 0; }
      else if (angle < 67.5) { ox = 1; oy = 1; }
      else if (angle < 112.5) { ox = 0; oy = 1; }
      else { ox = -1; oy = 1; }
      if (g < m(i + ox, j + oy) || g < m(i - ox, j - oy)) continue;
      cls[k] = g >= high ? 2 : 1;
    }
  std::vector<std::uint8_t> edges(y.size(), 0);
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * w + i;
      if (cls[k] == 2) {
        edges[k] = 1;
      } else if (cls[k] == 1) {
        for (int dy = -1; dy <= 1 && !edges[k]; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int xx = i + dx, yy = j + dy;
            if (xx >= 0 && yy >= 0 && xx < w && yy < h && cls[static_cast<std::size_t>(yy) * w + xx] == 2) {
              edges[k] = 1;
              break;
            }
          }
      }
    }
  return edges;
}

inline void canny_edges(FloatImage& img, double low, double high) {
  const auto edges = canny_edge_mask(img, low, high);
  for (int c = 0; c < 3; ++c) {
    auto p = img.plane(c);
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i]) p[i] = 1.0f;
  }
}

// Rectangles of `area_frac` of the image each, aspect ratio in [1/2, 2];
// placement retries to avoid overlap (up to 64 attempts per rectangle).
inline std::vector<Rect> cutout_rects(int w, int h, int count, double area_frac, Rng& rng) {
  std::vector<Rect> rects;
  const double area = area_frac * w * h;
  for (int i = 0; i < count; ++i) {
    Rect best{};
    for (int attempt = 0; attempt < 64; ++attempt) {
      const double aspect = std::exp(rng.uniform(std::log(0.5), std::log(2.0)));
      const int rw = std::clamp(static_cast<int>(std::lround(std::sqrt(area * aspect))), 1, w);
      const int rh = std::clamp(static_cast<int>(std::lround(std::sqrt(area / aspect))), 1, h);
      const Rect r{static_cast<int>(rng.between(0, w - rw)), static_cast<int>(rng.between(0, h - rh)), rw, rh};
      best = r;
      if (std::none_of(rects.begin(), rects.end(), [&](const Rect& o) { return o.overlaps(r); })) break;
    }
    rects.push_back(best);
  }
  return rects;
}

inline void cutout(FloatImage& img, int count, double area_frac, Rng& rng) {
  const int w = img.width();
  for (const auto& r : cutout_rects(img.width(), img.height(), count, area_frac, rng))
    for (int c = 0; c < 3; ++c) {
      auto p = img.plane(c);
      for (int y = r.y; y < r.y + r.height; ++y)
        for (int x = r.x; x < r.x + r.width; ++x) p[static_cast<std::size_t>(y) * w + x] = 0.0f;
    }
}

}  // namespace roadstress::perturb
