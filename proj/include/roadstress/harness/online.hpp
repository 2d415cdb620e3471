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

#include <atomic>
#include <filesystem>
#include <functional>
#include <mutex>
#include <thread>

#include "roadstress/harness/agents.hpp"
#include "roadstress/harness/config.hpp"
#include "roadstress/harness/report.hpp"
#include "roadstress/img/png_io.hpp"
#include "roadstress/metrics/driving.hpp"
#include "roadstress/sim/episode.hpp"

namespace roadstress {

struct PlannedEpisode {
  std::string id;
  std::size_t weather = 0;  // index into the config's weather list
  std::size_t road = 0;     // index into the resolved roads
  std::optional<PerturbationSetting> perturbation;
};

inline std::uint64_t episode_seed(std::uint64_t master, std::size_t weather, Kind kind, int level, std::size_t road) {
  return derive_seed(derive_seed(master, 0x0a11e, weather), kind_index(kind) + 1,
                     (static_cast<std::uint64_t>(level) << 20) | road);
}

// Per weather: the nominal episodes, then kinds x levels x roads.
inline std::vector<PlannedEpisode> plan_online(const SuiteConfig& cfg, const std::vector<Kind>& kinds,
                                               const std::vector<NamedRoad>& roads) {
  std::vector<PlannedEpisode> plan;
  for (std::size_t w = 0; w < cfg.weather.size(); ++w) {
    const std::string& wn = cfg.weather[w];
    for (std::size_t r = 0; r < roads.size(); ++r)
      plan.push_back({wn + "__nominal__" + roads[r].name, w, r, std::nullopt});
    for (Kind k : kinds)
      for (int level : cfg.levels)
        for (std::size_t r = 0; r < roads.size(); ++r)
          plan.push_back({wn + "__" + std::string(kind_name(k)) + "__L" + std::to_string(level) + "__" + roads[r].name,
                          w, r, PerturbationSetting{k, level, episode_seed(cfg.seed, w, k, level, r)}});
  }
  return plan;
}

struct OnlineRun {
  std::vector<PlannedEpisode> plan;
  std::vector<EpisodeLog> logs;
  std::vector<EpisodeResult> results;
  std::vector<OnlineRow> rows;
};

using OnlineProgress = std::function<void(std::size_t done, std::size_t total, const EpisodeResult&)>;

inline OnlineRun run_online(const SuiteConfig& cfg, const std::vector<NamedRoad>& roads,
                            const DrivingAgentSource& agents, const Catalog& catalog = Catalog::builtin(),
                            const OnlineProgress& progress = {}, const std::filesystem::path& frame_dir = {}) {
  validate(cfg);
  OnlineRun run;
  run.plan = plan_online(cfg, resolve_kinds(cfg, catalog), roads);
  const std::size_t n = run.plan.size();
  run.logs.resize(n);
  run.results.resize(n);

  std::mutex mu;
  std::size_t done = 0;
  auto run_one = [&](std::size_t i, DrivingAgent& agent) {
    const PlannedEpisode& p = run.plan[i];
    const NamedRoad& road = roads[p.road];
    EpisodeConfig ec;
    ec.weather = &find_weather(cfg.weather[p.weather]);
    ec.dt = cfg.dt;
    ec.timeout_s = cfg.timeout_s;
    ec.perturbation = p.perturbation;
    ec.catalog = &catalog;
    if (cfg.dump_frames && !frame_dir.empty()) {
      const std::filesystem::path dir = frame_dir / p.id;
      std::filesystem::create_directories(dir);
      ec.on_frame = [dir](std::uint64_t k, const Image& img, Action) {
        char name[32];
        std::snprintf(name, sizeof name, "%06llu.png", static_cast<unsigned long long>(k));
        write_png(dir / name, img);
      };
    }
    run.logs[i] = run_episode(road.road, agent, ec, p.id, road.name);
    run.results[i] = {p.id, cfg.weather[p.weather], p.perturbation, road.name,
                      classify_outcome(run.logs[i], road.road, cfg.timeout_s)};
    std::lock_guard lock(mu);
    ++done;
    if (progress) progress(done, n, run.results[i]);
  };

  const std::size_t workers = agents.parallel_safe() ? std::min<std::size_t>(cfg.workers, n) : 1;
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      auto agent = agents.make();
      run_one(i, *agent);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        try {
          for (std::size_t i; (i = next++) < n;) {
            auto agent = agents.make();
            run_one(i, *agent);
          }
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  run.rows = aggregate_online(run.results, cfg.strict);
  return run;
}

}  // namespace roadstress
