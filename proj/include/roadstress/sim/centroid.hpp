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

// Image-driven baseline driver: steers towards the centroid of road-grey
// pixels in the lower half of the frame.

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "roadstress/img/image.hpp"
#include "roadstress/sim/episode.hpp"
#include "roadstress/sim/render.hpp"

namespace roadstress {

struct CentroidConfig {
  int road_level = 107;  // kRoadColor quantized
  int tolerance = 20;    // per-channel half width of the RGB box
  double gain = 1.6;
  double cruise_throttle = 0.5;
  double slowdown = 0.6;  // throttle reduction at full steering
  int min_pixels = 40;
};

inline bool is_road_pixel(const std::uint8_t* px, const CentroidConfig& c) {
  return std::abs(px[0] - c.road_level) <= c.tolerance && std::abs(px[1] - c.road_level) <= c.tolerance &&
         std::abs(px[2] - c.road_level) <= c.tolerance;
}

// Horizontal centroid offset of road pixels in the lower half, in [-1, 1]
// (positive = right of center); empty when too few road pixels.
inline std::optional<double> road_centroid_offset(const Image& img, const CentroidConfig& c = {}) {
  const int w = img.width(), h = img.height();
  const double cx = (w - 1) / 2.0;
  double sum = 0.0;
  long count = 0;
  const auto data = img.data();
  for (int y = h / 2; y < h; ++y) {
    const std::uint8_t* row = data.data() + static_cast<std::size_t>(y) * w * 3;
    for (int x = 0; x < w; ++x) {
      if (!is_road_pixel(row + 3 * x, c)) continue;
      sum += x - cx;
      ++count;
    }
  }
  if (count < c.min_pixels) return std::nullopt;
  return sum / static_cast<double>(count) / cx;
}

// Positive steering turns left, so a road centroid to the right of the
// image center gives negative steering.
inline Action centroid_action(const Image& img, const CentroidConfig& c = {}) {
  const auto offset = road_centroid_offset(img, c);
  if (!offset) return {0.0, 0.0};
  const double steering = std::clamp(-c.gain * *offset, -1.0, 1.0);
  return {steering, c.cruise_throttle * (1.0 - c.slowdown * std::abs(steering))};
}

class CentroidAgent : public DrivingAgent {
 public:
  explicit CentroidAgent(CentroidConfig c = {}) : cfg_(c) {}
  std::string name() const override { return "centroid"; }
  Action act(const Observation& obs) override {
    require(obs.image != nullptr, Errc::agent_error, "centroid agent needs a frame");
    return centroid_action(*obs.image, cfg_);
  }

 private:
  CentroidConfig cfg_;
};

}  // namespace roadstress
