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

// Per-episode logs and their JSON-lines form: one header line, then one
// line per evaluated frame.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "roadstress/core/error.hpp"
#include "roadstress/perturb/kinds.hpp"

namespace roadstress {

struct PerturbationSetting {
  Kind kind{};
  int level = 1;
  std::uint64_t seed = 0;
  bool operator==(const PerturbationSetting&) const = default;
};

struct FrameRecord {
  std::uint64_t index = 0;
  double t = 0.0;
  double x = 0.0, y = 0.0, heading = 0.0, speed = 0.0;
  double cte = 0.0;
  double progress = 0.0;
  std::optional<double> steering, throttle;  // empty on the terminal frame
  bool operator==(const FrameRecord&) const = default;
};

struct EpisodeLog {
  std::string episode_id;
  std::string agent;
  std::string road;
  double lane_width = 4.0;
  std::optional<PerturbationSetting> perturbation;
  std::string weather = "nominal";
  double dt = 1.0 / 30.0;
  double timeout_s = 200.0;
  std::string abort_reason;  // non-empty when the agent failed
  std::vector<FrameRecord> frames;
  bool operator==(const EpisodeLog&) const = default;
};

inline std::string episode_log_to_jsonl(const EpisodeLog& log) {
  using nlohmann::json;
  json head = {{"type", "episode"},       {"episode_id", log.episode_id}, {"agent", log.agent},
               {"road", log.road},        {"lane_width", log.lane_width}, {"weather", log.weather},
               {"dt", log.dt},            {"timeout_s", log.timeout_s},   {"abort_reason", log.abort_reason},
               {"perturbation", nullptr}, {"frames", log.frames.size()}};
  if (log.perturbation)
    head["perturbation"] = {{"kind", std::string(kind_name(log.perturbation->kind))},
                            {"level", log.perturbation->level},
                            {"seed", log.perturbation->seed}};
  std::string out = head.dump(-1, ' ', true, json::error_handler_t::replace) + "\n";
  for (const FrameRecord& f : log.frames) {
    json j = {{"type", "frame"}, {"i", f.index},         {"t", f.t},     {"x", f.x},
              {"y", f.y},        {"heading", f.heading}, {"speed", f.speed}, {"cte", f.cte},
              {"progress", f.progress}};
    j["steering"] = f.steering ? json(*f.steering) : json(nullptr);
    j["throttle"] = f.throttle ? json(*f.throttle) : json(nullptr);
    out += j.dump(-1, ' ', true, json::error_handler_t::replace) + "\n";
  }
  return out;
}

inline EpisodeLog episode_log_from_jsonl(const std::string& text) {
  using nlohmann::json;
  std::istringstream in(text);
  std::string line;
  EpisodeLog log;
  bool have_head = false;
  int lineno = 0;
  try {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "episode") {
        log.episode_id = j.at("episode_id").get<std::string>();
        log.agent = j.at("agent").get<std::string>();
        log.road = j.at("road").get<std::string>();
        log.lane_width = j.at("lane_width").get<double>();
        log.weather = j.at("weather").get<std::string>();
        log.dt = j.at("dt").get<double>();
        log.timeout_s = j.at("timeout_s").get<double>();
        log.abort_reason = j.at("abort_reason").get<std::string>();
        const json& p = j.at("perturbation");
        if (!p.is_null())
          log.perturbation = PerturbationSetting{parse_kind(p.at("kind").get<std::string>()),
                                                 p.at("level").get<int>(), p.at("seed").get<std::uint64_t>()};
        have_head = true;
      } else if (type == "frame") {
        FrameRecord f;
        f.index = j.at("i").get<std::uint64_t>();
        f.t = j.at("t").get<double>();
        f.x = j.at("x").get<double>();
        f.y = j.at("y").get<double>();
        f.heading = j.at("heading").get<double>();
        f.speed = j.at("speed").get<double>();
        f.cte = j.at("cte").get<double>();
        f.progress = j.at("progress").get<double>();
        if (!j.at("steering").is_null()) f.steering = j.at("steering").get<double>();
        if (!j.at("throttle").is_null()) f.throttle = j.at("throttle").get<double>();
        log.frames.push_back(f);
      } else {
        fail(Errc::invalid_argument, "unknown record type '" + type + "'");
      }
    }
  } catch (const json::exception& e) {
    fail(Errc::invalid_argument, "episode log line " + std::to_string(lineno) + ": " + e.what());
  }
  require(have_head, Errc::invalid_argument, "episode log has no header line");
  return log;
}

inline void save_episode_log(const EpisodeLog& log, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), Errc::io_error, "cannot write " + path.string());
  f << episode_log_to_jsonl(log);
}

inline EpisodeLog load_episode_log(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), Errc::io_error, "cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return episode_log_from_jsonl(ss.str());
}

}  // namespace roadstress
