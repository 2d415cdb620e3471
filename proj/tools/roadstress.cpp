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

// roadstress command-line entry point.
//
// Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "roadstress/bench/bench.hpp"
#include "roadstress/harness/suite.hpp"
#include "roadstress/img/png_io.hpp"
#include "roadstress/perturb/apply.hpp"
#include "roadstress/road/roadgen.hpp"

namespace fs = std::filesystem;
using namespace roadstress;

namespace {

constexpr const char* kConfigEnv = "ROADSTRESS_CONFIG";

// Flags shared by the suite commands; unset ones leave the config alone.
struct SuiteFlags {
  std::string config, manifest, out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> agent, perturbations, levels, roads, dataset, weather, mode;
  std::optional<double> timeout_s;
  std::optional<int> workers, deadline_ms;
  bool include_over_budget = false;
  bool dump_frames = false;
  bool embed_labels = false;

  void add(CLI::App* cmd, bool with_mode = false) {
    cmd->add_option("--config", config, "suite config file (default: $" + std::string(kConfigEnv) + ")");
    cmd->add_option("--manifest", manifest, "re-run from a manifest.json written by an earlier run");
    cmd->add_option("--out", out, "output directory (default: current directory)");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--agent", agent, "agent spec");
    cmd->add_option("--perturbations", perturbations, "all | nominal-only | comma-separated ids");
    cmd->add_option("--levels", levels, "comma-separated intensity levels");
    cmd->add_option("--roads", roads, "presets | preset:i-j | road files");
    cmd->add_option("--dataset", dataset, "dataset directory");
    cmd->add_option("--weather", weather, "comma-separated weather presets");
    cmd->add_option("--timeout", timeout_s, "episode timeout in seconds");
    cmd->add_option("--workers", workers, "parallel episodes for builtin agents");
    cmd->add_option("--deadline-ms", deadline_ms, "per-frame reply deadline for remote agents");
    cmd->add_flag("--include-over-budget", include_over_budget, "keep kinds flagged over the frame budget");
    cmd->add_flag("--dump-frames", dump_frames, "write every perturbed frame as PNG");
    cmd->add_flag("--embed-labels", embed_labels, "write class ids into the red channel (test mode)");
    if (with_mode) cmd->add_option("--mode", mode, "max_intensity | all_levels");
  }

  SuiteContext context() const {
    if (!manifest.empty()) return load_manifest(manifest).ctx;
    std::string path = config;
    if (path.empty())
      if (const char* env = std::getenv(kConfigEnv)) path = env;
    SuiteConfig cfg;
    fs::path base = fs::current_path();
    if (!path.empty()) {
      cfg = load_suite_config(path);
      base = fs::absolute(path).parent_path();
    }
    std::string overrides;
    auto set = [&](const char* key, const std::optional<std::string>& v) {
      if (v) overrides += std::string(key) + " = " + *v + "\n";
    };
    set("agent", agent);
    set("perturbations", perturbations);
    set("levels", levels);
    set("roads", roads);
    set("weather", weather);
    set("augment_mode", mode);
    if (seed) overrides += "seed = " + std::to_string(*seed) + "\n";
    if (timeout_s) overrides += "timeout_s = " + detail::fmt_double(*timeout_s) + "\n";
    if (workers) overrides += "workers = " + std::to_string(*workers) + "\n";
    if (deadline_ms) overrides += "deadline_ms = " + std::to_string(*deadline_ms) + "\n";
    if (include_over_budget) overrides += "include_over_budget = true\n";
    if (dump_frames) overrides += "dump_frames = true\n";
    if (embed_labels) overrides += "embed_labels = true\n";
    cfg = parse_suite_config(overrides, cfg);
    // paths given on the command line are relative to the working directory
    if (dataset) cfg.dataset = fs::absolute(*dataset).string();
    if (roads && *roads != "presets" && roads->rfind("preset:", 0) != 0) {
      std::string abs;
      for (const std::string& r : detail::split(*roads, ','))
        abs += (abs.empty() ? "" : ",") + (r.rfind("preset:", 0) == 0 ? r : fs::absolute(r).string());
      cfg.roads = abs;
    }
    return make_context(cfg, base);
  }
};

std::pair<int, int> parse_size(const std::string& s) {
  const auto x = s.find('x');
  require(x != std::string::npos, Errc::invalid_argument, "size must be HEIGHTxWIDTH, e.g. 240x320");
  const int h = std::stoi(s.substr(0, x)), w = std::stoi(s.substr(x + 1));
  check_dimensions(w, h);
  return {h, w};
}

const Catalog& catalog_from(const std::string& path, Catalog& storage) {
  if (path.empty()) return Catalog::builtin();
  storage = Catalog::load(path);
  return storage;
}

int run(int argc, char** argv) {
  CLI::App app{"roadstress: image perturbation benchmark and robustness harness for lane-keeping agents"};
  app.require_subcommand(1);

  // bench
  auto* bench = app.add_subcommand("bench", "time every perturbation against the frame budget");
  std::string bench_size = "240x320", bench_out = ".", bench_catalog, bench_kinds = "all";
  int bench_iters = kDefaultBenchIterations;
  double bench_fps = 30.0;
  std::uint64_t bench_seed = 0;
  bench->add_option("--size", bench_size, "HEIGHTxWIDTH");
  bench->add_option("--iters", bench_iters, "timed iterations per kind and level");
  bench->add_option("--kinds", bench_kinds, "all or comma-separated ids");
  bench->add_option("--fps", bench_fps, "frame rate defining the budget");
  bench->add_option("--seed", bench_seed, "seed for inputs and perturbation streams");
  bench->add_option("--config", bench_catalog, "catalog file");
  bench->add_option("--out", bench_out, "output directory for bench.csv and bench.svg");

  // perturb
  auto* perturb = app.add_subcommand("perturb", "apply one perturbation to a PNG");
  std::string p_kind, p_in, p_out, p_catalog;
  int p_level = 1;
  std::uint64_t p_seed = 0;
  perturb->add_option("--kind", p_kind, "perturbation name or code")->required();
  perturb->add_option("--level", p_level, "intensity level 1..5")->required();
  perturb->add_option("--seed", p_seed, "seed");
  perturb->add_option("--config", p_catalog, "catalog file");
  perturb->add_option("input", p_in, "input PNG")->required();
  perturb->add_option("output", p_out, "output PNG")->required();

  // suites
  SuiteFlags offline_f, online_f, shadow_f, augment_f;
  auto* offline = app.add_subcommand("offline", "evaluate a segmentation agent on a perturbed dataset");
  offline_f.add(offline);
  auto* online = app.add_subcommand("online", "run closed-loop driving episodes under perturbation");
  online_f.add(online);
  auto* shadow = app.add_subcommand("shadow", "collect expert-labelled frames in shadow mode");
  shadow_f.add(shadow);
  auto* augment = app.add_subcommand("augment", "export an augmented copy of a dataset");
  augment_f.add(augment, true);

  // roads
  auto* roads = app.add_subcommand("roads", "generate road files");
  std::string r_out;
  int r_count = 1;
  bool r_presets = false;
  RoadGenConfig rg;
  roads->add_option("--out", r_out, "output directory")->required();
  roads->add_flag("--presets", r_presets, "write the preset roads");
  roads->add_option("--count", r_count, "number of roads");
  roads->add_option("--seed", rg.seed, "first seed; road i uses seed + i");
  roads->add_option("--segments", rg.segment_count, "arc segments per road");
  roads->add_option("--segment-length", rg.segment_length_m, "segment length in meters");
  roads->add_option("--max-turn", rg.max_turn_deg, "maximum turn per segment in degrees");
  roads->add_option("--lane-width", rg.lane_width_m, "lane width in meters");

  // report
  auto* report = app.add_subcommand("report", "re-render reports from the logs of a run");
  std::string rep_dir;
  report->add_option("dir", rep_dir, "run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  auto note = [](const std::string& s) { std::cerr << s << "\n"; };

  if (*bench) {
    const auto [h, w] = parse_size(bench_size);
    Catalog storage = Catalog::builtin();
    const Catalog& cat = catalog_from(bench_catalog, storage);
    SuiteConfig sel;
    sel.perturbations = bench_kinds;
    sel.include_over_budget = true;
    std::vector<BenchResult> results;
    for (Kind k : resolve_kinds(sel, cat))
      for (int l = 1; l <= 5; ++l) {
        results.push_back(measure(k, IntensityLevel(l), w, h, bench_iters, bench_seed, cat));
        note(std::string(kind_name(k)) + " L" + std::to_string(l) + ": " + detail::fmt_double(results.back().mean_ms) + " ms");
      }
    const Budget budget{bench_fps};
    fs::create_directories(bench_out);
    detail::write_text(fs::path(bench_out) / "bench.csv", bench_csv(results));
    detail::write_text(fs::path(bench_out) / "bench.svg", bench_svg(results, budget));
    const GateResult g = gate(results, budget);
    nlohmann::json m = {{"tool", "roadstress"}, {"command", "bench"}, {"size", bench_size}, {"iters", bench_iters},
                        {"fps", bench_fps},     {"seed", bench_seed},  {"kinds", bench_kinds},
                        {"catalog", cat.to_text()}};
    nlohmann::json excluded = nlohmann::json::array();
    for (Kind k : g.excluded) excluded.push_back(kind_name(k));
    m["over_budget"] = excluded;
    detail::write_text(fs::path(bench_out) / "manifest.json", m.dump(2) + "\n");
    std::cout << "budget " << detail::fmt_double(budget.budget_ms()) << " ms; over budget:";
    for (Kind k : g.excluded) std::cout << ' ' << kind_name(k);
    std::cout << (g.excluded.empty() ? " none\n" : "\n");
    return 0;
  }
  if (*perturb) {
    Catalog storage = Catalog::builtin();
    const Catalog& cat = catalog_from(p_catalog, storage);
    write_png(p_out, apply(parse_kind(p_kind), read_png(p_in), IntensityLevel(p_level), Seed{p_seed}, cat));
    return 0;
  }
  if (*offline) {
    const auto run = offline_suite(offline_f.context(), offline_f.out);
    std::cout << offline_csv(run.rows);
    return 0;
  }
  if (*online) {
    const auto run = online_suite(online_f.context(), online_f.out, [&](std::size_t done, std::size_t total, const EpisodeResult& r) {
      note("[" + std::to_string(done) + "/" + std::to_string(total) + "] " + r.episode_id + ": " +
           std::string(status_name(r.outcome.status)));
    });
    std::cout << online_csv(run.rows);
    return 0;
  }
  if (*shadow) {
    const auto run = shadow_suite(shadow_f.context(), shadow_f.out);
    std::cout << run.samples << " samples written to " << shadow_f.out << "\n";
    return 0;
  }
  if (*augment) {
    const auto sum = augment_suite(augment_f.context(), augment_f.out);
    std::cout << sum.images << " images from " << sum.source_items << " source items written to " << augment_f.out
              << "\n";
    return 0;
  }
  if (*roads) {
    fs::create_directories(r_out);
    nlohmann::json list = nlohmann::json::array();
    auto emit = [&](const std::string& name, const Road& road, std::uint64_t seed) {
      save_road(road, fs::path(r_out) / (name + ".txt"));
      list.push_back({{"name", name}, {"seed", seed}, {"length_m", road.length_m()}});
      std::cout << name << ".txt " << detail::fmt_double(road.length_m()) << " m\n";
    };
    if (r_presets) {
      for (int i = 1; i <= kPresetRoadCount; ++i) emit("preset" + std::to_string(i), preset_road(i), preset_config(i).seed);
    } else {
      require(r_count >= 1, Errc::invalid_argument, "--count must be >= 1");
      const std::uint64_t first = rg.seed;
      for (int i = 0; i < r_count; ++i) {
        RoadGenConfig c = rg;
        c.seed = first + static_cast<std::uint64_t>(i);
        emit("road" + std::to_string(i), generate(c), c.seed);
      }
    }
    nlohmann::json m = {{"tool", "roadstress"}, {"command", "roads"}, {"presets", r_presets}, {"count", r_count},
                        {"seed", rg.seed},      {"segments", rg.segment_count}, {"segment_length", rg.segment_length_m},
                        {"max_turn", rg.max_turn_deg}, {"lane_width", rg.lane_width_m}, {"roads", list}};
    detail::write_text(fs::path(r_out) / "manifest.json", m.dump(2) + "\n");
    return 0;
  }
  if (*report) {
    std::cout << rebuild_report(rep_dir);
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "roadstress: " << errc_name(e.code()) << ": " << e.what() << "\n";
  } catch (const CLI::Error& e) {
    std::cerr << "roadstress: usage: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "roadstress: error: " << e.what() << "\n";
  }
  return 2;
}
