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

// Polyline roads and the geometry queries used by the simulator, the
// expert and the metrics.
//
// World frame: x east, y north, headings counter-clockwise from +x. The
// left side of a direction d is d rotated by +90 degrees.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "roadstress/core/error.hpp"

namespace roadstress {

struct Vec2 {
  double x = 0.0, y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 heading_vector(double heading) { return {std::cos(heading), std::sin(heading)}; }

// Nearest point of the centerline to a query position.
struct Projection {
  std::size_t segment = 0;  // index of the segment start waypoint
  double t = 0.0;           // position along the segment in [0, 1]
  Vec2 point;
  double distance = 0.0;
  double cte = 0.0;  // signed, positive left of the travel direction
  double arc = 0.0;  // arc length from the start to `point`
};

class Road {
 public:
  Road() = default;
  Road(std::vector<Vec2> waypoints, double lane_width) : pts_(std::move(waypoints)), lane_width_(lane_width) {
    require(pts_.size() >= 2, Errc::invalid_argument, "road needs at least 2 waypoints");
    require(lane_width_ > 0.0 && std::isfinite(lane_width_), Errc::invalid_argument, "lane width must be > 0");
    cum_.assign(pts_.size(), 0.0);
    for (std::size_t i = 1; i < pts_.size(); ++i) {
      require(std::isfinite(pts_[i].x) && std::isfinite(pts_[i].y), Errc::invalid_argument,
              "waypoint is not finite");
      const double len = norm(pts_[i] - pts_[i - 1]);
      require(len > 0.0, Errc::invalid_argument, "consecutive waypoints must be distinct");
      cum_[i] = cum_[i - 1] + len;
    }
  }

  const std::vector<Vec2>& waypoints() const { return pts_; }
  double lane_width() const { return lane_width_; }
  double length_m() const { return cum_.back(); }
  std::size_t segment_count() const { return pts_.size() - 1; }
  const std::vector<double>& cumulative() const { return cum_; }
  Vec2 start() const { return pts_.front(); }
  Vec2 goal() const { return pts_.back(); }
  double start_heading() const { return segment_heading(0); }

  double segment_heading(std::size_t i) const {
    const Vec2 d = pts_[i + 1] - pts_[i];
    return std::atan2(d.y, d.x);
  }

  // Exhaustive nearest-segment search. Ties keep the earliest segment.
  Projection project(Vec2 p) const {
    Projection best;
    best.distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
      const Vec2 a = pts_[i], d = pts_[i + 1] - a;
      const double len2 = dot(d, d);
      const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
      const Vec2 q = a + d * t;
      const double dist = norm(p - q);
      if (dist < best.distance) {
        best.segment = i;
        best.t = t;
        best.point = q;
        best.distance = dist;
        best.cte = cross(d, p - a) >= 0.0 ? dist : -dist;
        best.arc = cum_[i] + t * (cum_[i + 1] - cum_[i]);
      }
    }
    return best;
  }

  // Point at arc length s, clamped to the road.
  Vec2 point_at(double s) const {
    if (s <= 0.0) return pts_.front();
    if (s >= length_m()) return pts_.back();
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - cum_.begin()) - 1;
    const double t = (s - cum_[i]) / (cum_[i + 1] - cum_[i]);
    return pts_[i] + (pts_[i + 1] - pts_[i]) * t;
  }

  // Reached when within half a lane width of the final waypoint.
  bool at_goal(Vec2 p) const { return norm(p - goal()) <= lane_width_ / 2.0; }

 private:
  std::vector<Vec2> pts_;
  std::vector<double> cum_;
  double lane_width_ = 4.0;
};

inline double cross_track_error(Vec2 p, const Road& road) { return road.project(p).cte; }

inline double progress(Vec2 p, const Road& road) {
  return std::clamp(road.project(p).arc / road.length_m(), 0.0, 1.0);
}

// Text format:
//   # comment lines are ignored
//   lane_width <meters>
//   <x> <y>          one waypoint per line, meters
inline std::string road_to_text(const Road& road) {
  std::ostringstream os;
  char buf[96];
  std::snprintf(buf, sizeof buf, "lane_width %.17g\n", road.lane_width());
  os << buf;
  for (const Vec2& p : road.waypoints()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
    os << buf;
  }
  return os.str();
}

inline Road road_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  double lane = 0.0;
  bool have_lane = false;
  std::vector<Vec2> pts;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    if (!have_lane) {
      std::string key;
      ls >> key >> lane;
      require(key == "lane_width" && !ls.fail(), Errc::invalid_argument,
              "road file line " + std::to_string(lineno) + ": expected 'lane_width <m>'");
      have_lane = true;
      continue;
    }
    Vec2 p;
    ls >> p.x >> p.y;
    require(!ls.fail(), Errc::invalid_argument, "road file line " + std::to_string(lineno) + ": expected 'x y'");
    pts.push_back(p);
  }
  require(have_lane, Errc::invalid_argument, "road file has no lane_width header");
  return Road(std::move(pts), lane);
}

inline Road load_road(const std::filesystem::path& path) {
  std::ifstream f(path);
  require(f.good(), Errc::io_error, "cannot open road file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return road_from_text(ss.str());
}

inline void save_road(const Road& road, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), Errc::io_error, "cannot write road file " + path.string());
  f << road_to_text(road);
}

}  // namespace roadstress
