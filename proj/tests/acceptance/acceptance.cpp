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

// One PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>

#include "../unit/test_util.hpp"
#include "roadstress/bench/bench.hpp"
#include "roadstress/harness/suite.hpp"
#include "roadstress/img/fft.hpp"

using namespace roadstress;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::vector<Kind> every_kind() {
  std::vector<Kind> out;
  for (const auto& e : kKindTable) out.push_back(e.kind);
  return out;
}

Verdict determinism() {
  const Image img = testutil::natural_image(320, 240);
  int pairs = 0, equal = 0;
  for (Kind k : every_kind())
    for (int l = 1; l <= 5; ++l)
      for (std::uint64_t s : {1ull, 77ull, 123456789ull}) {
        ++pairs;
        equal += apply(k, img, IntensityLevel(l), Seed{s}) == apply(k, img, IntensityLevel(l), Seed{s});
      }
  return {equal == pairs, fmt("%d/%d pairs byte-identical over %zu kinds", equal, pairs, kKindCount)};
}

Verdict neutral_identity() {
  const Image img = testutil::natural_image(320, 240);
  int checked = 0, ok = 0;
  std::string without, bad;
  for (Kind k : every_kind()) {
    const auto p = neutral_params(k);
    if (!p) {
      without += (without.empty() ? "" : ",") + std::string(kind_name(k));
      continue;
    }
    ++checked;
    if (apply_with_params(k, img, *p, Seed{9}) == img) ++ok;
    else bad += " " + std::string(kind_name(k));
  }
  return {ok == checked && checked > 0,
          fmt("%d/%d kinds identical; no neutral setting: %s%s", ok, checked, without.c_str(), bad.c_str())};
}

Verdict latency_gate() {
  std::vector<BenchResult> results;
  for (Kind k : every_kind())
    for (int l = 1; l <= 5; ++l) results.push_back(measure(k, IntensityLevel(l), 320, 240, 250));
  const GateResult g = gate(results);
  Kind slowest = g.worst_mean_ms.begin()->first;
  for (const auto& [k, ms] : g.worst_mean_ms)
    if (ms > g.worst_mean_ms.at(slowest)) slowest = k;
  bool others_ok = true;
  std::string over;
  for (const auto& [k, ms] : g.worst_mean_ms)
    if (k != Kind::zoom_blur && ms >= Budget{}.budget_ms()) {
      others_ok = false;
      over += fmt(" %s=%.1fms", std::string(kind_name(k)).c_str(), ms);
    }
  double runner_up = 0.0;
  for (const auto& [k, ms] : g.worst_mean_ms)
    if (k != Kind::zoom_blur) runner_up = std::max(runner_up, ms);
  return {slowest == Kind::zoom_blur && others_ok,
          fmt("zoom_blur worst %.1f ms, slowest other %.1f ms, budget %.1f ms, excluded %zu%s",
              g.worst_mean_ms.at(Kind::zoom_blur), runner_up, Budget{}.budget_ms(), g.excluded.size(), over.c_str())};
}

Verdict iou_oracle() {
  Rng rng(4242);
  int exact = 0;
  for (int t = 0; t < 1000; ++t) {
    SegMap p(8, 8), g(8, 8);
    for (auto& v : p.classes) v = static_cast<std::uint8_t>(rng.below(4));
    for (auto& v : g.classes) v = static_cast<std::uint8_t>(rng.below(4));
    bool same = true;
    const ClassIoU got = iou_per_class(p, g, 4);
    for (int k = 0; k < 4; ++k) {
      int inter = 0, uni = 0;
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
          inter += p.at(x, y) == k && g.at(x, y) == k;
          uni += p.at(x, y) == k || g.at(x, y) == k;
        }
      const std::optional<double> want = uni ? std::optional<double>(static_cast<double>(inter) / uni) : std::nullopt;
      same = same && got[k] == want;
    }
    exact += same;
  }
  SegMap a(8, 8), b(8, 8);
  for (int i = 0; i < 64; ++i) {
    a.classes[i] = static_cast<std::uint8_t>(i % 2);
    b.classes[i] = static_cast<std::uint8_t>(2 + i % 2);
  }
  const double identity = mean_iou(a, a, 4), disjoint = mean_iou(a, b, 4);
  return {exact == 1000 && identity == 1.0 && disjoint == 0.0,
          fmt("%d/1000 exact, identity %.1f, disjoint %.1f", exact, identity, disjoint)};
}

Verdict jitter_forms() {
  const std::vector<double> flat(100, 0.3);
  std::vector<double> alt;
  for (int i = 0; i < 101; ++i) alt.push_back(i % 2 ? -1.0 : 1.0);
  const double j0 = jitter(flat, 4.0), j1 = jitter(alt, 4.0);
  return {j0 == 0.0 && j1 == 50.0, fmt("constant %.17g%%, alternating %.17g%%", j0, j1)};
}

Verdict phase_scramble() {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const FloatImage f = to_float(testutil::noise_image(320, 240, 500 + i));
    Rng rng(derive_seed(i, 1, 2));
    const auto planes = perturb::phase_scramble_planes(f, 0.2 + 0.08 * static_cast<double>(i), rng);
    for (int c = 0; c < 3; ++c) {
      const ComplexPlane a = fft2(f.plane(c), 320, 240);
      const ComplexPlane b = fft2(std::span<const double>(planes[c]), 320, 240);
      double peak = 0.0;
      for (const auto& z : a.data) peak = std::max(peak, std::abs(z));
      for (std::size_t k = 0; k < a.data.size(); ++k) {
        const double ma = std::abs(a.data[k]);
        worst = std::max(worst, std::abs(ma - std::abs(b.data[k])) / std::max(ma, 1e-12 * peak));
      }
    }
  }
  return {worst <= 1e-4, fmt("worst per-bin relative magnitude error %.3g", worst)};
}

Verdict posterize_bound() {
  std::size_t most = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Image in = s < 5 ? testutil::noise_image(320, 240, s) : testutil::natural_image(320, 240);
    const Image out = apply(Kind::posterize, in, IntensityLevel(5), Seed{s});
    for (int c = 0; c < 3; ++c) {
      std::set<int> vals;
      for (std::size_t i = 0; i < out.pixel_count(); ++i) vals.insert(out.data()[3 * i + c]);
      most = std::max(most, vals.size());
    }
  }
  return {most <= 8, fmt("max %zu distinct values per channel", most)};
}

Verdict expert_baseline() {
  int ok = 0;
  double worst_jitter = 0.0, min_completion = 1.0;
  for (int i = 1; i <= 10; ++i) {
    const Road road = preset_road(i);
    ExpertAgent expert;
    const EpisodeOutcome o = classify_outcome(run_episode(road, expert, {}), road, kDefaultTimeout);
    ok += o.status == EpisodeStatus::success;
    worst_jitter = std::max(worst_jitter, o.jitter_pct);
    min_completion = std::min(min_completion, o.completion);
  }
  return {ok == 10 && min_completion == 1.0 && worst_jitter < 5.0,
          fmt("%d/10 success, min completion %.3f, max jitter %.2f%%", ok, min_completion, worst_jitter)};
}

Verdict degradation() {
  SuiteConfig cfg;
  cfg.agent = "builtin:centroid";
  cfg.perturbations = "nominal-only";
  const auto roads = resolve_roads(cfg);
  const DrivingAgentSource agents = open_driving_agent(cfg.agent);
  const auto nominal = run_online(cfg, roads, agents);
  const double base = nominal.rows.at(0).avg_success_pct;
  std::string hits;
  int count = 0, evaluated = 0;
  // Existence check: stops at the fifth qualifying kind, in catalog order.
  for (Kind k : resolve_kinds(SuiteConfig{}, Catalog::builtin())) {
    if (count >= 5) break;
    ++evaluated;
    SuiteConfig c = cfg;
    c.perturbations = std::string(kind_name(k));
    c.levels = {5};
    const auto run = run_online(c, roads, agents);
    const double pct = run.rows.at(1).avg_success_pct;
    if (base - pct >= 20.0) {
      ++count;
      hits += fmt(" %s=%.0f%%", std::string(kind_name(k)).c_str(), pct);
    }
  }
  return {base >= 80.0 && count >= 5, fmt("nominal %.0f%%, %d of %d evaluated kinds drop >= 20 pp at L5:%s", base, count,
                                          evaluated, hits.c_str())};
}

Verdict augmentation() {
  testutil::TempDir tmp;
  testutil::write_seg_dataset(tmp / "src", 10, 64, 48, 5);
  const std::vector<Kind> kinds{Kind::gaussian_noise, Kind::fog, Kind::cutout};
  const auto max = export_augmented(tmp / "src", kinds, AugmentMode::max_intensity, tmp / "max", 11);
  const auto all = export_augmented(tmp / "src", kinds, AugmentMode::all_levels, tmp / "all", 11);
  std::size_t mismatched = 0, labels = 0;
  for (const fs::path& dir : {tmp / "max", tmp / "all"})
    for (const auto& p : list_pngs(dir / "labels")) {
      const std::string stem = p.stem().string();
      ++labels;
      mismatched += slurp(p) != slurp(tmp / "src" / "labels" / (stem.substr(0, stem.find("__")) + ".png"));
    }
  const std::size_t files_max = list_pngs(tmp / "max" / "images").size(), files_all = list_pngs(tmp / "all" / "images").size();
  return {max.images == 40 && all.images == 160 && files_max == 40 && files_all == 160 && labels == 200 && mismatched == 0,
          fmt("max_intensity %zu images, all_levels %zu images, %zu/%zu labels byte-identical", files_max, files_all,
              labels - mismatched, labels)};
}

Verdict suite_determinism() {
  testutil::TempDir tmp;
  SuiteConfig cfg;
  cfg.agent = "builtin:centroid";
  cfg.perturbations = "gaussian_noise,fog,false_color,elastic";
  cfg.roads = "preset:1-3";
  cfg.timeout_s = 60.0;
  cfg.seed = 2024;
  online_suite(make_context(cfg, tmp.path()), tmp / "a");
  online_suite(make_context(cfg, tmp.path()), tmp / "b");
  const Manifest m = load_manifest(tmp / "a" / "manifest.json");
  online_suite(m.ctx, tmp / "c");
  const std::string a = slurp(tmp / "a" / "report.csv");
  const bool same = !a.empty() && a == slurp(tmp / "b" / "report.csv") && a == slurp(tmp / "c" / "report.csv");
  return {same, fmt("%zu-byte report.csv identical across two runs and a manifest replay", a.size())};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"determinism", 60.0, determinism},
      {"neutral-identity", 10.0, neutral_identity},
      {"latency-gate", 300.0, latency_gate},
      {"iou-oracle", 5.0, iou_oracle},
      {"jitter-closed-forms", 0.0, jitter_forms},
      {"phase-scramble-spectrum", 0.0, phase_scramble},
      {"posterize-bound", 0.0, posterize_bound},
      {"expert-baseline", 180.0, expert_baseline},
      {"degradation-existence", 1200.0, degradation},
      {"augmentation-counts", 0.0, augmentation},
      {"suite-determinism", 0.0, suite_determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0.0 && s >= c.limit_s) {
      v.pass = false;
      v.detail += fmt("; over the %.0f s limit", c.limit_s);
    }
    std::printf("%s %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", c.name, v.detail.c_str(), s);
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed ? 1 : 0;
}
