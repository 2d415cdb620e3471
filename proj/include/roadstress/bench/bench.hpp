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

// Per-frame latency benchmark and the budget gate derived from it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "roadstress/core/error.hpp"
#include "roadstress/core/rng.hpp"
#include "roadstress/core/svg.hpp"
#include "roadstress/img/image.hpp"
#include "roadstress/perturb/apply.hpp"

namespace roadstress {

inline constexpr int kDefaultBenchIterations = 250;
inline constexpr int kBenchWarmup = 10;
inline constexpr int kFrameWidth = 320;
inline constexpr int kFrameHeight = 240;

struct BenchResult {
  Kind kind{};
  int level = 1;
  int iterations = 0;
  double mean_ms = 0.0;
  double std_ms = 0.0;
  double max_ms = 0.0;
};

struct Budget {
  double frame_rate_fps = 30.0;
  double budget_ms() const { return 1000.0 / frame_rate_fps; }
};

inline Image random_image(int width, int height, Rng& rng) {
  Image img(width, height);
  for (std::uint8_t& b : img.data()) b = static_cast<std::uint8_t>(rng.below(256));
  return img;
}

// Population statistics of a sample of durations.
inline BenchResult summarize(Kind kind, int level, const std::vector<double>& ms) {
  require(!ms.empty(), Errc::invalid_argument, "no timing samples");
  BenchResult r{kind, level, static_cast<int>(ms.size()), 0.0, 0.0, 0.0};
  double sum = 0.0;
  for (double v : ms) sum += v;
  r.mean_ms = sum / ms.size();
  double ss = 0.0;
  for (double v : ms) ss += (v - r.mean_ms) * (v - r.mean_ms);
  r.std_ms = std::sqrt(ss / ms.size());
  r.max_ms = *std::max_element(ms.begin(), ms.end());
  return r;
}

// Times apply() only. Inputs come from a small pool generated up front.
inline BenchResult measure(Kind kind, IntensityLevel level, int width = kFrameWidth,
                           int height = kFrameHeight, int iterations = kDefaultBenchIterations,
                           std::uint64_t seed = 0, const Catalog& catalog = Catalog::builtin()) {
  require(iterations >= 1, Errc::invalid_argument, "iterations must be >= 1");
  check_dimensions(width, height);
  Rng rng(derive_seed(seed, 0xbe9c, 0));
  std::vector<Image> pool;
  pool.reserve(8);
  for (int i = 0; i < 8; ++i) pool.push_back(random_image(width, height, rng));
  const PerturbationSpec& spec = catalog.spec(kind);
  const ParamVector params = spec.params(level);

  std::vector<double> ms;
  ms.reserve(iterations);
  std::size_t sink = 0;
  for (int i = 0; i < kBenchWarmup + iterations; ++i) {
    const Image& in = pool[i % pool.size()];
    const auto t0 = std::chrono::steady_clock::now();
    const Image out = apply_with_params(kind, in, params, Seed{static_cast<std::uint64_t>(i)}, level);
    const auto t1 = std::chrono::steady_clock::now();
    sink += out.data()[0];
    if (i >= kBenchWarmup) ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  // Keeps the result observable so the call cannot be elided.
  if (sink == static_cast<std::size_t>(-1)) std::fputs("", stderr);
  return summarize(kind, level.value(), ms);
}

inline BenchResult measure(std::string_view id, IntensityLevel level, int width = kFrameWidth,
                           int height = kFrameHeight, int iterations = kDefaultBenchIterations,
                           std::uint64_t seed = 0) {
  return measure(parse_kind(id), level, width, height, iterations, seed);
}

struct GateResult {
  std::vector<Kind> included;
  std::vector<Kind> excluded;
  std::map<Kind, double> worst_mean_ms;

  bool is_excluded(Kind k) const {
    return std::find(excluded.begin(), excluded.end(), k) != excluded.end();
  }
};

// A kind is excluded iff its slowest level's mean exceeds the budget.
// Output lists are in catalog order whatever the input order.
inline GateResult gate(const std::vector<BenchResult>& results, Budget budget = {}) {
  require(!results.empty(), Errc::invalid_argument, "gate needs at least one result");
  GateResult g;
  for (const BenchResult& r : results) {
    auto [it, fresh] = g.worst_mean_ms.emplace(r.kind, r.mean_ms);
    if (!fresh) it->second = std::max(it->second, r.mean_ms);
  }
  for (const auto& [kind, worst] : g.worst_mean_ms)
    (worst > budget.budget_ms() ? g.excluded : g.included).push_back(kind);
  return g;
}

inline std::string bench_csv(const std::vector<BenchResult>& results) {
  std::ostringstream os;
  os << "kind,level,iterations,mean_ms,std_ms,max_ms\n";
  char buf[160];
  for (const BenchResult& r : results) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%.4f,%.4f,%.4f\n", std::string(kind_name(r.kind)).c_str(),
                  r.level, r.iterations, r.mean_ms, r.std_ms, r.max_ms);
    os << buf;
  }
  return os.str();
}

inline std::string bench_svg(const std::vector<BenchResult>& results, Budget budget = {}) {
  const GateResult g = gate(results, budget);
  std::vector<Bar> bars;
  for (const auto& [kind, worst] : g.worst_mean_ms)
    bars.push_back({std::string(kind_code(kind)) + " " + std::string(kind_name(kind)), worst,
                    worst > budget.budget_ms()});
  return bar_chart_svg("Worst-level mean latency per kind", "ms", bars, budget.budget_ms());
}

}  // namespace roadstress
