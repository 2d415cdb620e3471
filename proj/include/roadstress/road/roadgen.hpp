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

// Seeded road generation: a straight lead-in followed by constant-curvature
// arcs, discretized into waypoints at most 2 m apart.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "roadstress/core/error.hpp"
#include "roadstress/core/rng.hpp"
#include "roadstress/road/road.hpp"

namespace roadstress {

struct RoadGenConfig {
  std::uint64_t seed = 0;
  int segment_count = 6;
  double segment_length_m = 15.0;
  double max_turn_deg = 30.0;
  double curvature_min_deg = -30.0;  // heading change per segment, degrees
  double curvature_max_deg = 30.0;
  double lane_width_m = 4.0;
  double lead_in_m = 10.0;
  double max_spacing_m = 2.0;
  int max_retries = 64;
};

inline void validate(const RoadGenConfig& c) {
  require(c.segment_count >= 1, Errc::invalid_argument, "segment_count must be >= 1");
  require(c.segment_length_m > 0.0, Errc::invalid_argument, "segment_length_m must be > 0");
  require(c.curvature_min_deg <= c.curvature_max_deg, Errc::invalid_argument, "curvature range is inverted");
  require(c.max_turn_deg >= 0.0 && c.max_turn_deg >= c.curvature_min_deg && c.max_turn_deg <= c.curvature_max_deg,
          Errc::invalid_argument, "max_turn_deg must lie within the curvature range");
  require(c.lane_width_m > 0.0, Errc::invalid_argument, "lane width must be > 0");
  require(c.lead_in_m >= 0.0, Errc::invalid_argument, "lead-in must be >= 0");
  require(c.max_spacing_m > 0.0 && c.max_spacing_m <= 2.0, Errc::invalid_argument,
          "waypoint spacing must be in (0, 2] m");
  require(c.max_retries >= 1, Errc::invalid_argument, "max_retries must be >= 1");
}

inline double segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  auto point_seg = [](Vec2 p, Vec2 s0, Vec2 s1) {
    const Vec2 v = s1 - s0;
    const double t = std::clamp(dot(p - s0, v) / dot(v, v), 0.0, 1.0);
    return norm(p - (s0 + v * t));
  };
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return 0.0;
  return std::min({point_seg(a, c, d), point_seg(b, c, d), point_seg(c, a, b), point_seg(d, a, b)});
}

// Segments further apart along the road than `min_arc_gap` must keep at
// least `clearance` between them.
inline bool has_clearance(const std::vector<Vec2>& pts, double clearance, double min_arc_gap) {
  std::vector<double> cum(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) cum[i] = cum[i - 1] + norm(pts[i] - pts[i - 1]);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    for (std::size_t j = i + 1; j + 1 < pts.size(); ++j) {
      if (cum[j] - cum[i + 1] <= min_arc_gap) continue;
      if (segment_distance(pts[i], pts[i + 1], pts[j], pts[j + 1]) < clearance) return false;
    }
  }
  return true;
}

namespace detail {

inline std::vector<Vec2> trace_road(const RoadGenConfig& c, Rng& rng) {
  const double deg = std::numbers::pi / 180.0;
  std::vector<Vec2> pts{{0.0, 0.0}};
  double heading = 0.0;
  auto run = [&](double length, double turn) {
    const int pieces = std::max(1, static_cast<int>(std::ceil(length / c.max_spacing_m)));
    const double ds = length / pieces, dh = turn / pieces;
    for (int k = 0; k < pieces; ++k) {
      // Chord of the arc piece, taken at the mid heading.
      const double mid = heading + dh / 2.0;
      const double chord = std::abs(dh) < 1e-12 ? ds : 2.0 * ds / dh * std::sin(dh / 2.0);
      pts.push_back(pts.back() + heading_vector(mid) * chord);
      heading += dh;
    }
  };
  if (c.lead_in_m > 0.0) run(c.lead_in_m, 0.0);
  for (int s = 0; s < c.segment_count; ++s) {
    const double draw = c.curvature_min_deg + (c.curvature_max_deg - c.curvature_min_deg) * rng.uniform();
    const double turn = std::clamp(draw, -c.max_turn_deg, c.max_turn_deg) * deg;
    run(c.segment_length_m, turn);
  }
  return pts;
}

}  // namespace detail

inline Road generate(const RoadGenConfig& c) {
  validate(c);
  for (int attempt = 0; attempt < c.max_retries; ++attempt) {
    Rng rng(derive_seed(c.seed, 0x40ad, static_cast<std::uint64_t>(attempt)));
    std::vector<Vec2> pts = detail::trace_road(c, rng);
    if (has_clearance(pts, c.lane_width_m, 3.0 * c.lane_width_m)) return Road(std::move(pts), c.lane_width_m);
  }
  fail(Errc::generation_failed, "road generation exhausted " + std::to_string(c.max_retries) +
                                    " retries for seed " + std::to_string(c.seed));
}

inline constexpr int kPresetRoadCount = 10;

// Ten fixed test roads in order of increasing difficulty.
inline RoadGenConfig preset_config(int index) {
  require(index >= 1 && index <= kPresetRoadCount, Errc::invalid_argument, "preset road index must be 1..10");
  RoadGenConfig c;
  c.seed = 7000 + static_cast<std::uint64_t>(index);
  c.segment_count = 6;
  c.segment_length_m = 12.0;
  c.max_turn_deg = 9.0 * index;
  c.curvature_min_deg = -c.max_turn_deg;
  c.curvature_max_deg = c.max_turn_deg;
  return c;
}

inline Road preset_road(int index) { return generate(preset_config(index)); }

inline std::vector<Road> preset_roads() {
  std::vector<Road> roads;
  for (int i = 1; i <= kPresetRoadCount; ++i) roads.push_back(preset_road(i));
  return roads;
}

}  // namespace roadstress
