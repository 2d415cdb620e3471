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

// Forward camera renderer for the toy simulator and its weather post-pass.
//
// Camera coordinates: X right, Y down, Z forward (pitched down by `pitch`).
// Road quads are projected and scan-filled in pixel coordinates centered
// on the principal point, so a centered straight road renders mirror
// symmetric.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roadstress/core/error.hpp"
#include "roadstress/core/rng.hpp"
#include "roadstress/img/image.hpp"
#include "roadstress/road/road.hpp"
#include "roadstress/sim/vehicle.hpp"

namespace roadstress {

struct Rgb {
  float r, g, b;
};

inline constexpr Rgb kSkyColor{0.53f, 0.75f, 0.95f};
inline constexpr Rgb kFieldColor{0.20f, 0.55f, 0.20f};
inline constexpr Rgb kRoadColor{0.42f, 0.42f, 0.42f};
inline constexpr Rgb kDashColor{0.90f, 0.80f, 0.20f};

struct Camera {
  int width = 320;
  int height = 240;
  double height_m = 1.6;
  double pitch_rad = 8.0 * std::numbers::pi / 180.0;
  double focal_px = 160.0;  // 90 degree horizontal field of view at 320 px
  double near_m = 0.5;
  double far_m = 100.0;

  double cx() const { return (width - 1) / 2.0; }
  double cy() const { return (height - 1) / 2.0; }
};

// Point in the vehicle frame: forward, left, up (meters) relative to the
// camera footprint on the ground.
struct CameraPoint {
  double x, y, z;  // camera X (right), Y (down), Z (forward)
};

inline CameraPoint to_camera(const Camera& cam, const VehicleState& s, Vec2 world, double up = 0.0) {
  const Vec2 rel = world - s.position();
  const Vec2 d = heading_vector(s.heading);
  const double fwd = dot(rel, d);
  const double right = -cross(d, rel);
  const double down = cam.height_m - up;
  const double c = std::cos(cam.pitch_rad), sn = std::sin(cam.pitch_rad);
  return {right, down * c - fwd * sn, fwd * c + down * sn};
}

// Ground point seen through the center of pixel (u, v), if the ray hits the
// ground in front of the camera. Returns {forward, right} in meters.
inline std::optional<std::array<double, 2>> pixel_ground_ray(const Camera& cam, double u, double v) {
  const double xu = (u - cam.cx()) / cam.focal_px;
  const double yv = (v - cam.cy()) / cam.focal_px;
  const double c = std::cos(cam.pitch_rad), sn = std::sin(cam.pitch_rad);
  const double denom = sn + yv * c;
  if (denom <= 0.0) return std::nullopt;
  const double t = cam.height_m / denom;
  return std::array<double, 2>{t * (c - yv * sn), t * xu};
}

struct WeatherPreset {
  std::string name = "nominal";
  double light = 1.0;  // multiplies the final color
  double haze = 0.0;   // blend weight towards haze_color
  Rgb haze_color{0.8f, 0.8f, 0.8f};
  int particles = 0;  // per frame
  Rgb particle_color{1.0f, 1.0f, 1.0f};
  int streak_px = 1;  // vertical particle length
};

inline const std::vector<WeatherPreset>& weather_presets() {
  static const std::vector<WeatherPreset> presets = {
      {"nominal", 1.0, 0.0, {0.8f, 0.8f, 0.8f}, 0, {1.0f, 1.0f, 1.0f}, 1},
      {"fog", 0.95, 0.55, {0.80f, 0.80f, 0.82f}, 0, {1.0f, 1.0f, 1.0f}, 1},
      {"rain", 0.80, 0.15, {0.55f, 0.58f, 0.62f}, 400, {0.70f, 0.72f, 0.80f}, 4},
      {"snow", 0.95, 0.20, {0.90f, 0.90f, 0.92f}, 600, {1.0f, 1.0f, 1.0f}, 1},
      {"dawn", 0.75, 0.20, {0.95f, 0.60f, 0.40f}, 0, {1.0f, 1.0f, 1.0f}, 1},
      {"moonshine", 0.35, 0.10, {0.30f, 0.35f, 0.60f}, 0, {1.0f, 1.0f, 1.0f}, 1},
      {"starry", 0.20, 0.05, {0.10f, 0.10f, 0.25f}, 150, {1.0f, 1.0f, 0.9f}, 1},
      {"dark_overcast", 0.45, 0.10, {0.50f, 0.50f, 0.50f}, 0, {1.0f, 1.0f, 1.0f}, 1},
  };
  return presets;
}

inline const WeatherPreset& find_weather(std::string_view name) {
  for (const WeatherPreset& w : weather_presets())
    if (w.name == name) return w;
  fail(Errc::not_found, "unknown weather preset '" + std::string(name) + "'");
}

namespace detail {

struct ScreenPt {
  double x, y;  // pixel offsets from the principal point
};

// Clips a ground polygon (camera coordinates) at the near plane and
// projects it.
inline std::vector<ScreenPt> project_polygon(const Camera& cam, const std::vector<CameraPoint>& poly) {
  std::vector<ScreenPt> out;
  const std::size_t n = poly.size();
  auto emit = [&](const CameraPoint& p) { out.push_back({cam.focal_px * p.x / p.z, cam.focal_px * p.y / p.z}); };
  for (std::size_t i = 0; i < n; ++i) {
    const CameraPoint& a = poly[i];
    const CameraPoint& b = poly[(i + 1) % n];
    const bool ain = a.z >= cam.near_m, bin = b.z >= cam.near_m;
    if (ain) emit(a);
    if (ain != bin) {
      // Interpolate from the inside end so mirrored edges round alike.
      const CameraPoint& in = ain ? a : b;
      const CameraPoint& out = ain ? b : a;
      const double t = (cam.near_m - in.z) / (out.z - in.z);
      emit({in.x + (out.x - in.x) * t, in.y + (out.y - in.y) * t, cam.near_m});
    }
  }
  return out;
}

// Scan-fills a convex screen polygon. A pixel is covered when its center
// lies inside or on the boundary.
inline void fill_convex(FloatImage& img, const Camera& cam, const std::vector<ScreenPt>& poly, Rgb color) {
  if (poly.size() < 3) return;
  double ymin = poly[0].y, ymax = poly[0].y;
  for (const ScreenPt& p : poly) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double cx = cam.cx(), cy = cam.cy();
  const int w = img.width(), h = img.height();
  const int j0 = std::max(0, static_cast<int>(std::floor(ymin + cy)) - 1);
  const int j1 = std::min(h - 1, static_cast<int>(std::ceil(ymax + cy)) + 1);
  auto R = img.plane(0), G = img.plane(1), B = img.plane(2);
  for (int j = j0; j <= j1; ++j) {
    const double yc = j - cy;
    if (yc < ymin || yc > ymax) continue;
    double xl = 1e300, xr = -1e300;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      // Canonical edge direction (lower y first) keeps the fill symmetric.
      ScreenPt a = poly[k], b = poly[(k + 1) % poly.size()];
      if (b.y < a.y) std::swap(a, b);
      if ((yc < a.y && yc < b.y) || (yc > a.y && yc > b.y)) continue;
      if (a.y == b.y) {
        xl = std::min({xl, a.x, b.x});
        xr = std::max({xr, a.x, b.x});
        continue;
      }
      const double x = a.x + (b.x - a.x) * ((yc - a.y) / (b.y - a.y));
      xl = std::min(xl, x);
      xr = std::max(xr, x);
    }
    if (xl > xr) continue;
    int i0 = std::max(0, static_cast<int>(std::floor(std::max(xl + cx, -1.0))));
    while (i0 < w && (i0 - cx) < xl) ++i0;
    int i1 = std::min(w - 1, static_cast<int>(std::ceil(std::min(xr + cx, w + 1.0))));
    while (i1 >= 0 && (i1 - cx) > xr) --i1;
    const std::size_t row = static_cast<std::size_t>(j) * w;
    for (int i = i0; i <= i1; ++i) {
      R[row + i] = color.r;
      G[row + i] = color.g;
      B[row + i] = color.b;
    }
  }
}

// Left-side offsets of a strip centered on `pts` with half width `half`,
// mitered at interior vertices.
inline std::vector<Vec2> strip_offsets(const std::vector<Vec2>& pts, double half) {
  std::vector<Vec2> off(pts.size());
  auto left = [](Vec2 d) {
    const double n = norm(d);
    return Vec2{-d.y / n, d.x / n};
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i == 0) {
      off[i] = left(pts[1] - pts[0]) * half;
    } else if (i + 1 == pts.size()) {
      off[i] = left(pts[i] - pts[i - 1]) * half;
    } else {
      const Vec2 n0 = left(pts[i] - pts[i - 1]), n1 = left(pts[i + 1] - pts[i]);
      Vec2 m = n0 + n1;
      const double mn = norm(m);
      if (mn < 1e-9) {
        off[i] = n0 * half;
        continue;
      }
      m = m * (1.0 / mn);
      const double c = std::max(0.25, dot(m, n0));
      off[i] = m * (half / c);
    }
  }
  return off;
}

inline void draw_strip(FloatImage& img, const Camera& cam, const VehicleState& s, const std::vector<Vec2>& pts,
                       double half, Rgb color) {
  if (pts.size() < 2) return;
  const std::vector<Vec2> off = strip_offsets(pts, half);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const std::vector<CameraPoint> quad = {
        to_camera(cam, s, pts[i] + off[i]), to_camera(cam, s, pts[i + 1] + off[i + 1]),
        to_camera(cam, s, pts[i + 1] - off[i + 1]), to_camera(cam, s, pts[i] - off[i])};
    if (quad[0].z < cam.near_m && quad[1].z < cam.near_m && quad[2].z < cam.near_m && quad[3].z < cam.near_m)
      continue;
    fill_convex(img, cam, project_polygon(cam, quad), color);
  }
}

// Centerline points between arc lengths s0 and s1.
inline std::vector<Vec2> centerline_piece(const Road& road, double s0, double s1) {
  std::vector<Vec2> pts{road.point_at(s0)};
  const auto& cum = road.cumulative();
  for (std::size_t i = 0; i < cum.size(); ++i)
    if (cum[i] > s0 && cum[i] < s1) pts.push_back(road.waypoints()[i]);
  const Vec2 end = road.point_at(s1);
  if (norm(end - pts.back()) > 1e-9) pts.push_back(end);
  return pts;
}

}  // namespace detail

inline constexpr double kDashLength = 3.0;
inline constexpr double kDashPeriod = 6.0;
inline constexpr double kDashHalfWidth = 0.075;

// Scene without weather: sky, field, road ribbon and centerline dashes.
inline FloatImage render_scene(const VehicleState& s, const Road& road, const Camera& cam = {}) {
  FloatImage img(cam.width, cam.height);
  auto R = img.plane(0), G = img.plane(1), B = img.plane(2);
  for (int j = 0; j < cam.height; ++j) {
    const auto hit = pixel_ground_ray(cam, cam.cx(), j);
    const Rgb c = hit && (*hit)[0] <= cam.far_m ? kFieldColor : kSkyColor;
    const std::size_t row = static_cast<std::size_t>(j) * cam.width;
    std::fill_n(R.begin() + row, cam.width, c.r);
    std::fill_n(G.begin() + row, cam.width, c.g);
    std::fill_n(B.begin() + row, cam.width, c.b);
  }
  // Only the stretch of road near the vehicle can be visible.
  const double here = road.project(s.position()).arc;
  const double s0 = std::max(0.0, here - 2.0 * cam.far_m), s1 = std::min(road.length_m(), here + cam.far_m);
  if (s1 > s0) {
    detail::draw_strip(img, cam, s, detail::centerline_piece(road, s0, s1), road.lane_width() / 2.0, kRoadColor);
    const double first = std::floor(s0 / kDashPeriod) * kDashPeriod;
    for (double d = first; d < s1; d += kDashPeriod) {
      const double a = std::max(d, s0), b = std::min(d + kDashLength, s1);
      if (b - a < 1e-6) continue;
      detail::draw_strip(img, cam, s, detail::centerline_piece(road, a, b), kDashHalfWidth, kDashColor);
    }
  }
  return img;
}

// Light, haze and particles. Particles are seeded by the frame index.
inline void apply_weather(FloatImage& img, const WeatherPreset& w, std::uint64_t frame_index) {
  const float light = static_cast<float>(w.light), haze = static_cast<float>(w.haze);
  const float hz[3] = {w.haze_color.r, w.haze_color.g, w.haze_color.b};
  if (w.light != 1.0 || w.haze != 0.0) {
    for (int c = 0; c < 3; ++c)
      for (float& v : img.plane(c)) v = std::clamp(light * ((1.0f - haze) * v + haze * hz[c]), 0.0f, 1.0f);
  }
  if (w.particles <= 0) return;
  Rng rng(derive_seed(0x3ea7e5, frame_index, static_cast<std::uint64_t>(w.particles)));
  const float pc[3] = {w.particle_color.r, w.particle_color.g, w.particle_color.b};
  for (int k = 0; k < w.particles; ++k) {
    const int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(img.width())));
    const int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(img.height())));
    for (int t = 0; t < w.streak_px && y + t < img.height(); ++t)
      for (int c = 0; c < 3; ++c) img.plane(c)[static_cast<std::size_t>(y + t) * img.width() + x] = pc[c];
  }
}

inline Image render(const VehicleState& s, const Road& road, const WeatherPreset& weather,
                    std::uint64_t frame_index = 0, const Camera& cam = {}) {
  FloatImage img = render_scene(s, road, cam);
  apply_weather(img, weather, frame_index);
  return quantize(img);
}

}  // namespace roadstress
