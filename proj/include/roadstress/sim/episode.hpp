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

// Closed-loop episodes: render, perturb, ask the agent, integrate.

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "roadstress/core/error.hpp"
#include "roadstress/core/rng.hpp"
#include "roadstress/img/image.hpp"
#include "roadstress/metrics/driving.hpp"
#include "roadstress/perturb/apply.hpp"
#include "roadstress/road/road.hpp"
#include "roadstress/sim/episode_log.hpp"
#include "roadstress/sim/render.hpp"
#include "roadstress/sim/vehicle.hpp"

namespace roadstress {

inline constexpr double kDefaultDt = 1.0 / 30.0;
inline constexpr double kDefaultTimeout = 200.0;

struct Observation {
  const Image* image = nullptr;  // perturbed frame; null for agents that do not need pixels
  VehicleState state;            // privileged; only pose-based agents may read it
  const Road* road = nullptr;
  std::uint64_t frame_index = 0;
  double sim_time_s = 0.0;
  std::string episode_id;
};

class DrivingAgent {
 public:
  virtual ~DrivingAgent() = default;
  virtual std::string name() const = 0;
  virtual bool needs_image() const { return true; }
  virtual void begin_episode(const std::string& /*episode_id*/) {}
  // Failures are reported by throwing roadstress::Error.
  virtual Action act(const Observation& obs) = 0;
  virtual void end_episode() {}
};

struct EpisodeConfig {
  const WeatherPreset* weather = nullptr;  // nominal when null
  double dt = kDefaultDt;
  double timeout_s = kDefaultTimeout;
  std::optional<PerturbationSetting> perturbation;
  VehicleParams vehicle;
  Camera camera;
  const Catalog* catalog = nullptr;  // builtin when null
  // Called for every frame the agent answered, with the image it saw.
  std::function<void(std::uint64_t frame, const Image& image, Action action)> on_frame;
};

inline Seed frame_seed(std::uint64_t seed, std::uint64_t frame) { return Seed{derive_seed(seed, 0xf7a3e, frame)}; }

inline EpisodeLog run_episode(const Road& road, DrivingAgent& agent, const EpisodeConfig& cfg,
                              const std::string& episode_id = "episode", const std::string& road_name = "road") {
  require(cfg.dt > 0.0, Errc::invalid_argument, "dt must be > 0");
  require(cfg.timeout_s > 0.0, Errc::invalid_argument, "timeout must be > 0");
  const WeatherPreset& weather = cfg.weather ? *cfg.weather : weather_presets().front();
  const Catalog& catalog = cfg.catalog ? *cfg.catalog : Catalog::builtin();
  EpisodeLog log;
  log.episode_id = episode_id;
  log.agent = agent.name();
  log.road = road_name;
  log.lane_width = road.lane_width();
  log.perturbation = cfg.perturbation;
  log.weather = weather.name;
  log.dt = cfg.dt;
  log.timeout_s = cfg.timeout_s;

  const bool wants_pixels = agent.needs_image() || static_cast<bool>(cfg.on_frame);
  const double half = road.lane_width() / 2.0;
  agent.begin_episode(episode_id);
  VehicleState state = start_state(road);
  for (std::uint64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const Projection proj = road.project(state.position());
    FrameRecord rec{k, t, state.x, state.y, state.heading, state.speed, proj.cte,
                    std::clamp(proj.arc / road.length_m(), 0.0, 1.0), std::nullopt, std::nullopt};
    if (std::abs(proj.cte) > half || road.at_goal(state.position()) || t >= cfg.timeout_s - kTimeEpsilon) {
      log.frames.push_back(rec);
      break;
    }
    Image frame(8, 8);
    if (wants_pixels) {
      frame = render(state, road, weather, k, cfg.camera);
      if (cfg.perturbation) {
        const PerturbationSetting& p = *cfg.perturbation;
        frame = apply(p.kind, frame, IntensityLevel(p.level), frame_seed(p.seed, k), catalog);
      }
    }
    Observation obs{wants_pixels ? &frame : nullptr, state, &road, k, t, episode_id};
    Action action;
    try {
      action = agent.act(obs).clamped();
    } catch (const Error& e) {
      log.abort_reason = std::string(errc_name(e.code())) + ": " + e.what();
      log.frames.push_back(rec);
      break;
    }
    rec.steering = action.steering;
    rec.throttle = action.throttle;
    log.frames.push_back(rec);
    if (cfg.on_frame) cfg.on_frame(k, frame, action);
    state = step(state, action, cfg.dt, cfg.vehicle);
  }
  agent.end_episode();
  return log;
}

// Built-in agent returning one fixed action.
class ConstantAgent : public DrivingAgent {
 public:
  explicit ConstantAgent(Action a) : action_(a) {}
  std::string name() const override { return "constant"; }
  bool needs_image() const override { return false; }
  Action act(const Observation&) override { return action_; }

 private:
  Action action_;
};

}  // namespace roadstress
