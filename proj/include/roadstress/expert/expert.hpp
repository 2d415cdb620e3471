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

// Ground-truth driver: pure-pursuit steering and PID throttle. It reads the
// vehicle pose, never pixels.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "roadstress/core/error.hpp"
#include "roadstress/img/png_io.hpp"
#include "roadstress/road/road.hpp"
#include "roadstress/sim/episode.hpp"
#include "roadstress/sim/vehicle.hpp"

namespace roadstress {

struct ExpertConfig {
  double lookahead_m = 6.0;
  double target_speed_mps = 8.0;
  double kp = 0.8, ki = 0.05, kd = 0.1;
  double cte_slowdown_gain = 1.0;
};

inline void validate(const ExpertConfig& c) {
  require(c.lookahead_m > 0.0, Errc::invalid_argument, "lookahead must be > 0");
  require(c.target_speed_mps > 0.0, Errc::invalid_argument, "target speed must be > 0");
  require(c.kp >= 0.0 && c.ki >= 0.0 && c.kd >= 0.0 && c.cte_slowdown_gain >= 0.0, Errc::invalid_argument,
          "gains must be >= 0");
}

// Signed angle from the heading to the direction of `target` (positive left).
inline double bearing_to(const VehicleState& s, Vec2 target) {
  const Vec2 d = heading_vector(s.heading), r = target - s.position();
  return std::atan2(cross(d, r), dot(d, r));
}

inline Vec2 pursuit_goal(const VehicleState& s, const Road& road, double lookahead_m) {
  return road.point_at(road.project(s.position()).arc + lookahead_m);
}

inline double pursuit_steer(const VehicleState& s, const Road& road, const ExpertConfig& cfg,
                            const VehicleParams& vp = {}) {
  const double alpha = bearing_to(s, pursuit_goal(s, road, cfg.lookahead_m));
  const double delta = std::atan2(2.0 * vp.wheelbase_m * std::sin(alpha), cfg.lookahead_m);
  return std::clamp(delta / vp.max_steer_rad, -1.0, 1.0);
}

struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
  bool primed = false;  // false until the first error is seen
};

struct PidOutput {
  double throttle;
  PidState state;
};

inline double effective_target(double cte, double lane_width, const ExpertConfig& cfg) {
  require(lane_width > 0.0, Errc::invalid_argument, "lane width must be > 0");
  return cfg.target_speed_mps * std::max(0.0, 1.0 - cfg.cte_slowdown_gain * std::abs(cte) / (lane_width / 2.0));
}

inline PidOutput pid_throttle(double speed, double cte, double lane_width, const ExpertConfig& cfg, PidState st,
                              double dt = kDefaultDt) {
  require(dt > 0.0, Errc::invalid_argument, "dt must be > 0");
  const double e = effective_target(cte, lane_width, cfg) - speed;
  st.integral += e * dt;
  if (cfg.ki > 0.0) st.integral = std::clamp(st.integral, -1.0 / cfg.ki, 1.0 / cfg.ki);
  const double deriv = st.primed ? (e - st.prev_error) / dt : 0.0;
  st.prev_error = e;
  st.primed = true;
  const double u = cfg.kp * e + cfg.ki * st.integral + cfg.kd * deriv;
  return {std::clamp(u, -1.0, 1.0), st};
}

class ExpertAgent : public DrivingAgent {
 public:
  explicit ExpertAgent(ExpertConfig cfg = {}, VehicleParams vp = {}, double dt = kDefaultDt)
      : cfg_(cfg), vp_(vp), dt_(dt) {
    validate(cfg_);
  }
  std::string name() const override { return "expert"; }
  bool needs_image() const override { return false; }
  void begin_episode(const std::string&) override { pid_ = {}; }
  Action act(const Observation& obs) override {
    require(obs.road != nullptr, Errc::agent_error, "expert needs the road");
    const double steer = pursuit_steer(obs.state, *obs.road, cfg_, vp_);
    const double cte = obs.road->project(obs.state.position()).cte;
    const PidOutput out = pid_throttle(obs.state.speed, cte, obs.road->lane_width(), cfg_, pid_, dt_);
    pid_ = out.state;
    return {steer, out.throttle};
  }

 private:
  ExpertConfig cfg_;
  VehicleParams vp_;
  double dt_;
  PidState pid_;
};

// ---- shadow-mode collection ----

struct ShadowSample {
  Image image;
  double steering = 0.0, throttle = 0.0;
  std::uint64_t road_seed = 0;
  std::string perturbation = "none";
  int level = 0;
};

struct ShadowRoad {
  Road road;
  std::uint64_t seed = 0;
};

struct ShadowConfig {
  ExpertConfig expert;
  std::uint64_t seed = 0;
  double timeout_s = kDefaultTimeout;
  const WeatherPreset* weather = nullptr;
};

// Grid of (kind, level); an empty list collects unperturbed frames.
inline std::vector<ShadowSample> shadow_collect(const std::vector<ShadowRoad>& roads,
                                                const std::vector<std::pair<Kind, int>>& perturbations,
                                                const ShadowConfig& cfg) {
  require(!roads.empty(), Errc::invalid_argument, "shadow collection needs at least one road");
  std::vector<std::optional<PerturbationSetting>> grid;
  if (perturbations.empty()) grid.push_back(std::nullopt);
  for (const auto& [kind, level] : perturbations)
    grid.push_back(PerturbationSetting{kind, IntensityLevel(level).value(), cfg.seed});
  std::vector<ShadowSample> out;
  for (const ShadowRoad& r : roads) {
    for (const auto& p : grid) {
      ExpertAgent expert(cfg.expert);
      EpisodeConfig ec;
      ec.weather = cfg.weather;
      ec.timeout_s = cfg.timeout_s;
      ec.perturbation = p;
      ec.on_frame = [&](std::uint64_t, const Image& img, Action a) {
        out.push_back({img, a.steering, a.throttle, r.seed, p ? std::string(kind_name(p->kind)) : "none",
                       p ? p->level : 0});
      };
      run_episode(r.road, expert, ec);
    }
  }
  return out;
}

inline std::string shadow_labels_csv(const std::vector<ShadowSample>& samples) {
  std::string out = "frame,steering,throttle,road_seed,perturbation,level\n";
  char buf[256];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ShadowSample& s = samples[i];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%llu,%s,%d\n", i, s.steering, s.throttle,
                  static_cast<unsigned long long>(s.road_seed), s.perturbation.c_str(), s.level);
    out += buf;
  }
  return out;
}

// Writes samples/NNNNNN.png (row i of labels.csv is sample i) and labels.csv.
inline void write_shadow_dataset(const std::vector<ShadowSample>& samples, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "samples");
  char name[32];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::snprintf(name, sizeof name, "%06zu.png", i);
    write_png(dir / "samples" / name, samples[i].image);
  }
  std::ofstream f(dir / "labels.csv", std::ios::binary);
  require(f.good(), Errc::io_error, "cannot write labels.csv");
  f << shadow_labels_csv(samples);
}

}  // namespace roadstress
