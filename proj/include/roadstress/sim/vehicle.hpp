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

// Kinematic bicycle model.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "roadstress/core/error.hpp"
#include "roadstress/road/road.hpp"

namespace roadstress {

struct VehicleState {
  double x = 0.0, y = 0.0;
  double heading = 0.0;  // radians, counter-clockwise from +x
  double speed = 0.0;    // m/s, never negative

  Vec2 position() const { return {x, y}; }
  bool operator==(const VehicleState&) const = default;
};

// Positive steering turns left. Both fields are clamped to [-1, 1].
struct Action {
  double steering = 0.0;
  double throttle = 0.0;

  Action clamped() const {
    auto c = [](double v) { return std::isnan(v) ? 0.0 : std::clamp(v, -1.0, 1.0); };
    return {c(steering), c(throttle)};
  }
  bool operator==(const Action&) const = default;
};

struct VehicleParams {
  double wheelbase_m = 2.5;
  double max_steer_rad = 25.0 * std::numbers::pi / 180.0;
  double max_accel_mps2 = 4.0;
  double drag_per_s = 0.1;
};

inline VehicleState step(const VehicleState& s, Action action, double dt, const VehicleParams& p = {}) {
  require(dt > 0.0, Errc::invalid_argument, "dt must be > 0");
  const Action a = action.clamped();
  VehicleState n = s;
  n.heading = s.heading + (s.speed / p.wheelbase_m) * std::tan(a.steering * p.max_steer_rad) * dt;
  n.x = s.x + s.speed * std::cos(n.heading) * dt;
  n.y = s.y + s.speed * std::sin(n.heading) * dt;
  n.speed = std::max(0.0, s.speed + (a.throttle * p.max_accel_mps2 - p.drag_per_s * s.speed) * dt);
  return n;
}

inline VehicleState start_state(const Road& road) {
  return {road.start().x, road.start().y, road.start_heading(), 0.0};
}

}  // namespace roadstress
