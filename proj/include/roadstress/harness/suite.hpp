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

// On-disk suites. Each writes its outputs plus manifest.json, which holds the
// resolved config, its base directory and the catalog text, enough to re-run
// the command with identical results.

#include <filesystem>

#include <json.hpp>

#include "roadstress/expert/expert.hpp"
#include "roadstress/harness/augment.hpp"
#include "roadstress/harness/offline.hpp"
#include "roadstress/harness/online.hpp"

namespace roadstress {

struct SuiteContext {
  SuiteConfig cfg;
  std::filesystem::path base;  // relative paths in cfg resolve against this
  Catalog catalog = Catalog::builtin();
};

inline std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

inline SuiteContext make_context(SuiteConfig cfg, const std::filesystem::path& base) {
  SuiteContext ctx{std::move(cfg), std::filesystem::absolute(base.empty() ? "." : base).lexically_normal(),
                   Catalog::builtin()};
  if (!ctx.cfg.catalog.empty()) ctx.catalog = Catalog::load(resolve_path(ctx.base, ctx.cfg.catalog));
  return ctx;
}

inline proto::RemotePolicy remote_policy(const SuiteConfig& c) { return {c.deadline_ms, parse_encoding(c.encoding)}; }

inline nlohmann::json manifest_head(const std::string& command, const SuiteContext& ctx) {
  return {{"tool", "roadstress"},        {"format", 1},
          {"command", command},          {"config", to_text(ctx.cfg)},
          {"base", ctx.base.string()},   {"catalog", ctx.catalog.to_text()}};
}

inline void write_manifest(const std::filesystem::path& out, const nlohmann::json& m) {
  detail::write_text(out / "manifest.json", m.dump(2) + "\n");
}

struct Manifest {
  std::string command;
  SuiteContext ctx;
  nlohmann::json raw;
};

inline Manifest load_manifest(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(detail::read_text(path));
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::invalid_argument, "bad manifest " + path.string() + ": " + e.what());
  }
  require(j.value("tool", "") == "roadstress" && j.contains("command") && j.contains("config"),
          Errc::invalid_argument, path.string() + " is not a roadstress manifest");
  Manifest m{j["command"].get<std::string>(), {}, j};
  m.ctx.cfg = parse_suite_config(j["config"].get<std::string>());
  m.ctx.base = j.value("base", std::string("."));
  m.ctx.catalog = j.contains("catalog") ? Catalog::parse(j["catalog"].get<std::string>()) : Catalog::builtin();
  return m;
}

inline std::string safe_file_name(std::string s) {
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  return s;
}

inline void write_online_reports(const std::filesystem::path& out, const std::vector<OnlineRow>& rows,
                                 const std::string& agent) {
  detail::write_text(out / "report.csv", online_csv(rows));
  detail::write_text(out / "report.md", online_markdown(rows, agent));
  detail::write_text(out / "report.svg", online_svg(rows));
}

inline void write_offline_reports(const std::filesystem::path& out, const std::vector<OfflineRow>& rows,
                                  const std::string& agent) {
  detail::write_text(out / "report.csv", offline_csv(rows));
  detail::write_text(out / "report.md", offline_markdown(rows, agent));
  detail::write_text(out / "report.svg", offline_svg(rows));
}

// ---- online ----

inline OnlineRun online_suite(const SuiteContext& ctx, const std::filesystem::path& out,
                              const OnlineProgress& progress = {}) {
  namespace fs = std::filesystem;
  const auto roads = resolve_roads(ctx.cfg, ctx.base);
  DrivingAgentSource agents = open_driving_agent(ctx.cfg.agent, remote_policy(ctx.cfg));
  fs::create_directories(out / "logs");
  fs::create_directories(out / "roads");
  OnlineRun run = run_online(ctx.cfg, roads, agents, ctx.catalog, progress, out / "frames");

  nlohmann::json m = manifest_head("online", ctx);
  nlohmann::json jroads = nlohmann::json::array(), episodes = nlohmann::json::array();
  for (const NamedRoad& r : roads) {
    const std::string file = "roads/" + safe_file_name(r.name) + ".txt";
    save_road(r.road, out / file);
    jroads.push_back({{"name", r.name}, {"seed", r.seed}, {"file", file}});
  }
  for (std::size_t i = 0; i < run.plan.size(); ++i) {
    const std::string file = "logs/" + safe_file_name(run.plan[i].id) + ".jsonl";
    save_episode_log(run.logs[i], out / file);
    const EpisodeResult& r = run.results[i];
    nlohmann::json e = {{"id", r.episode_id}, {"log", file}, {"road", r.road}, {"weather", r.weather},
                        {"status", status_name(r.outcome.status)}};
    if (r.perturbation)
      e["perturbation"] = {{"kind", kind_name(r.perturbation->kind)},
                           {"level", r.perturbation->level},
                           {"seed", r.perturbation->seed}};
    else
      e["perturbation"] = nullptr;
    episodes.push_back(std::move(e));
  }
  m["roads"] = jroads;
  m["episodes"] = episodes;
  m["outputs"] = {"report.csv", "report.md", "report.svg"};
  const std::string agent = run.logs.empty() ? ctx.cfg.agent : run.logs.front().agent;
  m["agent"] = agent;
  write_online_reports(out, run.rows, agent);
  write_manifest(out, m);
  return run;
}

// ---- offline ----

inline OfflineRun offline_suite(const SuiteContext& ctx, const std::filesystem::path& out,
                                const OfflineProgress& progress = {}) {
  require(!ctx.cfg.dataset.empty(), Errc::invalid_argument, "offline suite needs a dataset");
  const auto dataset_dir = resolve_path(ctx.base, ctx.cfg.dataset);
  const auto dataset = load_seg_dataset(dataset_dir);
  auto agent = open_segmentation_agent(ctx.cfg.agent, remote_policy(ctx.cfg), ctx.cfg.embed_labels);
  OfflineRun run = run_offline(ctx.cfg, dataset, *agent, ctx.catalog, progress);
  std::filesystem::create_directories(out);
  detail::write_text(out / "offline_log.csv", offline_log_csv(run.results));
  write_offline_reports(out, run.rows, agent->name());
  nlohmann::json m = manifest_head("offline", ctx);
  m["dataset"] = std::filesystem::absolute(dataset_dir).string();
  m["images"] = dataset.size();
  m["num_classes"] = run.num_classes;
  m["agent"] = agent->name();
  m["outputs"] = {"offline_log.csv", "report.csv", "report.md", "report.svg"};
  write_manifest(out, m);
  return run;
}

// ---- report re-rendering ----

// Rebuilds the report files of an online or offline run from its logs and
// returns the new report.csv text.
inline std::string rebuild_report(const std::filesystem::path& dir) {
  const Manifest m = load_manifest(dir / "manifest.json");
  const std::string agent = m.raw.value("agent", m.ctx.cfg.agent);
  if (m.command == "offline") {
    const auto rows = aggregate_offline(offline_log_from_csv(detail::read_text(dir / "offline_log.csv")));
    write_offline_reports(dir, rows, agent);
    return offline_csv(rows);
  }
  require(m.command == "online", Errc::invalid_argument, "no report for a " + m.command + " run");
  std::map<std::string, Road> roads;
  for (const auto& r : m.raw.at("roads")) roads.emplace(r.at("name").get<std::string>(), load_road(dir / r.at("file").get<std::string>()));
  std::vector<EpisodeResult> results;
  for (const auto& e : m.raw.at("episodes")) {
    const EpisodeLog log = load_episode_log(dir / e.at("log").get<std::string>());
    const auto it = roads.find(log.road);
    require(it != roads.end(), Errc::invalid_argument, "log " + log.episode_id + " names unknown road " + log.road);
    results.push_back({log.episode_id, log.weather, log.perturbation, log.road,
                       classify_outcome(log, it->second, log.timeout_s)});
  }
  const auto rows = aggregate_online(results, m.ctx.cfg.strict);
  write_online_reports(dir, rows, agent);
  return online_csv(rows);
}

// ---- shadow collection ----

struct ShadowRun {
  std::size_t samples = 0;
};

inline ShadowRun shadow_suite(const SuiteContext& ctx, const std::filesystem::path& out) {
  const auto roads = resolve_roads(ctx.cfg, ctx.base);
  std::vector<ShadowRoad> sroads;
  for (const NamedRoad& r : roads) sroads.push_back({r.road, r.seed});
  std::vector<std::pair<Kind, int>> grid;
  for (Kind k : resolve_kinds(ctx.cfg, ctx.catalog))
    for (int level : ctx.cfg.levels) grid.emplace_back(k, level);
  std::vector<ShadowSample> all;
  for (const std::string& w : ctx.cfg.weather) {
    ShadowConfig sc;
    sc.seed = ctx.cfg.seed;
    sc.timeout_s = ctx.cfg.timeout_s;
    sc.weather = &find_weather(w);
    auto part = shadow_collect(sroads, grid, sc);
    std::move(part.begin(), part.end(), std::back_inserter(all));
  }
  write_shadow_dataset(all, out);
  nlohmann::json m = manifest_head("shadow", ctx);
  m["samples"] = all.size();
  m["outputs"] = {"samples/", "labels.csv"};
  write_manifest(out, m);
  return {all.size()};
}

// ---- augmentation ----

inline AugmentSummary augment_suite(const SuiteContext& ctx, const std::filesystem::path& out) {
  require(!ctx.cfg.dataset.empty(), Errc::invalid_argument, "augment needs a dataset");
  SuiteConfig all = ctx.cfg;
  all.include_over_budget = true;
  const auto kinds = resolve_kinds(all, ctx.catalog);
  AugmentSummary sum = export_augmented(resolve_path(ctx.base, ctx.cfg.dataset), kinds,
                                        parse_augment_mode(ctx.cfg.augment_mode), out, ctx.cfg.seed, ctx.catalog);
  nlohmann::json m = manifest_head("augment", ctx);
  m["images"] = sum.images;
  m["labels"] = sum.labels;
  m["outputs"] = {"augment_manifest.json"};
  write_manifest(out, m);
  return sum;
}

}  // namespace roadstress
