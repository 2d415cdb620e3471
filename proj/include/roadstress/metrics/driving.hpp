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

// Driving metrics: outcome classification, success and completion rates,
// jitter.

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roadstress/core/error.hpp"
#include "roadstress/road/road.hpp"
#include "roadstress/sim/episode_log.hpp"

namespace roadstress {

// Simulated-time comparisons tolerate the rounding of k * dt.
inline constexpr double kTimeEpsilon = 1e-9;

enum class EpisodeStatus { success, out_of_road, out_of_time, agent_error };

inline std::string_view status_name(EpisodeStatus s) {
  switch (s) {
    case EpisodeStatus::success: return "success";
    case EpisodeStatus::out_of_road: return "out_of_road";
    case EpisodeStatus::out_of_time: return "out_of_time";
    case EpisodeStatus::agent_error: return "agent_error";
  }
  return "?";
}

struct EpisodeOutcome {
  EpisodeStatus status = EpisodeStatus::success;
  double completion = 0.0;
  double elapsed_s = 0.0;
  double jitter_pct = 0.0;
  std::size_t end_frame = 0;  // index into the log's frames
};

inline double jitter(std::span<const double> cte, double lane_width) {
  require(cte.size() >= 2, Errc::invalid_argument, "jitter needs at least 2 samples");
  require(lane_width > 0.0, Errc::invalid_argument, "lane width must be > 0");
  double sum = 0.0;
  for (std::size_t t = 0; t + 1 < cte.size(); ++t) sum += std::abs(cte[t + 1] - cte[t]) / lane_width;
  return 100.0 * sum / static_cast<double>(cte.size() - 1);
}

// Walks the frames in order. At each frame: off-road first, then goal,
// then timeout.
inline EpisodeOutcome classify_outcome(const EpisodeLog& log, const Road& road, double timeout_s) {
  require(!log.frames.empty(), Errc::invalid_argument, "episode log is empty");
  require(timeout_s > 0.0, Errc::invalid_argument, "timeout must be > 0");
  const double half = road.lane_width() / 2.0;
  EpisodeOutcome out;
  auto finish = [&](EpisodeStatus st, std::size_t k, double completion) {
    out.status = st;
    out.end_frame = k;
    out.elapsed_s = log.frames[k].t;
    out.completion = completion;
    std::vector<double> series;
    for (std::size_t i = 0; i <= k; ++i) series.push_back(log.frames[i].cte);
    out.jitter_pct = series.size() >= 2 ? jitter(series, road.lane_width()) : 0.0;
    return out;
  };
  for (std::size_t k = 0; k < log.frames.size(); ++k) {
    const FrameRecord& f = log.frames[k];
    const Vec2 p{f.x, f.y};
    if (std::abs(road.project(p).cte) > half) {
      const double last = k == 0 ? 0.0 : progress({log.frames[k - 1].x, log.frames[k - 1].y}, road);
      return finish(EpisodeStatus::out_of_road, k, last);
    }
    if (road.at_goal(p)) return finish(EpisodeStatus::success, k, 1.0);
    if (f.t >= timeout_s - kTimeEpsilon) return finish(EpisodeStatus::out_of_time, k, progress(p, road));
  }
  const std::size_t k = log.frames.size() - 1;
  const FrameRecord& f = log.frames[k];
  if (!log.abort_reason.empty()) return finish(EpisodeStatus::agent_error, k, progress({f.x, f.y}, road));
  fail(Errc::invalid_argument, "episode log ends before any terminal condition");
}

inline double success_rate(std::span<const EpisodeOutcome> outcomes) {
  require(!outcomes.empty(), Errc::invalid_argument, "success rate of no outcomes");
  std::size_t n = 0;
  for (const EpisodeOutcome& o : outcomes) n += o.status == EpisodeStatus::success;
  return 100.0 * static_cast<double>(n) / static_cast<double>(outcomes.size());
}

inline double completion_rate(std::span<const EpisodeOutcome> outcomes) {
  require(!outcomes.empty(), Errc::invalid_argument, "completion rate of no outcomes");
  double sum = 0.0;
  for (const EpisodeOutcome& o : outcomes) sum += o.completion;
  return 100.0 * sum / static_cast<double>(outcomes.size());
}

}  // namespace roadstress
