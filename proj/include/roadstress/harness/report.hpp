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

// Report rows and their CSV / markdown / SVG renderings. Rows are pure
// reductions over per-episode or per-image records, so a report can be
// rebuilt from persisted logs at any time.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "roadstress/core/svg.hpp"
#include "roadstress/metrics/driving.hpp"
#include "roadstress/perturb/kinds.hpp"
#include "roadstress/sim/episode_log.hpp"

namespace roadstress {

inline constexpr const char* kNominal = "nominal";

// ---- online ----

struct EpisodeResult {
  std::string episode_id;
  std::string weather;
  std::optional<PerturbationSetting> perturbation;  // empty = nominal
  std::string road;
  EpisodeOutcome outcome;
};

struct OnlineRow {
  std::string weather;
  std::string perturbation;  // kind name or "nominal"
  std::string code;
  int episodes = 0;
  double avg_success_pct = 0.0;
  double std_success_pct = 0.0;
  std::array<std::optional<double>, 5> trend{};  // success fraction per level; empty if not run
  int out_of_road = 0, out_of_time = 0, agent_errors = 0;
  std::optional<double> avg_time_s, avg_jitter_pct;  // over successful episodes
};

namespace detail {

struct Moments {
  double mean = 0.0, stddev = 0.0, max = 0.0, min = 0.0;
};

inline Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  m.max = m.min = v.front();
  for (double x : v) {
    m.mean += x;
    m.max = std::max(m.max, x);
    m.min = std::min(m.min, x);
  }
  m.mean /= static_cast<double>(v.size());
  for (double x : v) m.stddev += (x - m.mean) * (x - m.mean);
  m.stddev = std::sqrt(m.stddev / static_cast<double>(v.size()));
  return m;
}

inline std::string cell(std::optional<double> v, const char* fmt = "%.4f") {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, *v);
  return buf;
}

}  // namespace detail

// Groups by weather, then perturbation, both in first-seen order with the
// nominal row forced first. Success fractions use all episodes when strict,
// otherwise agent-error episodes drop out of the denominator.
inline std::vector<OnlineRow> aggregate_online(const std::vector<EpisodeResult>& episodes, bool strict = true) {
  std::vector<std::string> weathers;
  std::map<std::string, std::vector<std::string>> kinds;  // weather -> perturbations in order
  std::map<std::pair<std::string, std::string>, std::vector<const EpisodeResult*>> groups;
  for (const EpisodeResult& e : episodes) {
    if (std::find(weathers.begin(), weathers.end(), e.weather) == weathers.end()) weathers.push_back(e.weather);
    const std::string p = e.perturbation ? std::string(kind_name(e.perturbation->kind)) : kNominal;
    auto& list = kinds[e.weather];
    if (std::find(list.begin(), list.end(), p) == list.end()) list.push_back(p);
    groups[{e.weather, p}].push_back(&e);
  }
  std::vector<OnlineRow> rows;
  for (const std::string& w : weathers) {
    auto order = kinds[w];
    std::stable_partition(order.begin(), order.end(), [](const std::string& p) { return p == kNominal; });
    for (const std::string& p : order) {
      const auto& group = groups[{w, p}];
      OnlineRow row;
      row.weather = w;
      row.perturbation = p;
      row.code = p == kNominal ? "-" : std::string(kind_code(parse_kind(p)));
      row.episodes = static_cast<int>(group.size());
      std::array<int, 6> wins{}, counted{};
      std::vector<double> times, jitters;
      for (const EpisodeResult* e : group) {
        const int level = e->perturbation ? e->perturbation->level : 0;
        const EpisodeStatus st = e->outcome.status;
        row.out_of_road += st == EpisodeStatus::out_of_road;
        row.out_of_time += st == EpisodeStatus::out_of_time;
        row.agent_errors += st == EpisodeStatus::agent_error;
        if (st == EpisodeStatus::agent_error && !strict) continue;
        ++counted[level];
        if (st == EpisodeStatus::success) {
          ++wins[level];
          times.push_back(e->outcome.elapsed_s);
          jitters.push_back(e->outcome.jitter_pct);
        }
      }
      std::vector<double> rates;
      auto frac = [&](int l) -> std::optional<double> {
        if (!counted[l]) return std::nullopt;
        return static_cast<double>(wins[l]) / counted[l];
      };
      if (p == kNominal) {
        row.trend.fill(frac(0));
        if (counted[0]) rates.push_back(100.0 * *frac(0));
      } else {
        for (int l = 1; l <= 5; ++l) {
          row.trend[l - 1] = frac(l);
          if (counted[l]) rates.push_back(100.0 * *frac(l));
        }
      }
      const auto m = detail::moments(rates);
      row.avg_success_pct = m.mean;
      row.std_success_pct = m.stddev;
      if (!times.empty()) {
        row.avg_time_s = detail::moments(times).mean;
        row.avg_jitter_pct = detail::moments(jitters).mean;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// Eighths blocks, low to high.
inline std::string trend_glyphs(const std::array<std::optional<double>, 5>& trend) {
  static const char* const glyphs[8] = {"▁", "▂", "▃", "▄", "▅", "▆", "▇", "█"};
  std::string out;
  for (const auto& f : trend) out += f ? glyphs[std::clamp(static_cast<int>(std::lround(*f * 7.0)), 0, 7)] : "·";
  return out;
}

inline std::string online_csv(const std::vector<OnlineRow>& rows) {
  std::string out =
      "weather,perturbation,code,episodes,avg_success_pct,std_success_pct,trend_l1,trend_l2,trend_l3,trend_l4,"
      "trend_l5,out_of_road,out_of_time,agent_error,avg_time_s,avg_jitter_pct\n";
  for (const OnlineRow& r : rows) {
    out += r.weather + "," + r.perturbation + "," + r.code + "," + std::to_string(r.episodes) + "," +
           detail::cell(r.avg_success_pct, "%.2f") + "," + detail::cell(r.std_success_pct, "%.2f");
    for (const auto& f : r.trend) out += "," + detail::cell(f);
    out += "," + std::to_string(r.out_of_road) + "," + std::to_string(r.out_of_time) + "," +
           std::to_string(r.agent_errors) + "," + detail::cell(r.avg_time_s, "%.3f") + "," +
           detail::cell(r.avg_jitter_pct, "%.3f") + "\n";
  }
  return out;
}

inline std::string online_markdown(const std::vector<OnlineRow>& rows, const std::string& agent) {
  std::string out = "# Online results: " + agent + "\n\n";
  std::string weather;
  for (const OnlineRow& r : rows) {
    if (r.weather != weather) {
      weather = r.weather;
      out += "\n## Weather: " + weather + "\n\n"
             "| Perturbation | Code | Runs | Avg % | Std % | Trend | OR | OT | AE | Time (s) | Jitter % |\n"
             "|---|---|---|---|---|---|---|---|---|---|---|\n";
    }
    auto dash = [](const std::string& s) { return s.empty() ? std::string("-") : s; };
    out += "| " + r.perturbation + " | " + r.code + " | " + std::to_string(r.episodes) + " | " +
           detail::cell(r.avg_success_pct, "%.1f") + " | " + detail::cell(r.std_success_pct, "%.1f") + " | " +
           trend_glyphs(r.trend) + " | " + std::to_string(r.out_of_road) + " | " + std::to_string(r.out_of_time) +
           " | " + std::to_string(r.agent_errors) + " | " + dash(detail::cell(r.avg_time_s, "%.2f")) + " | " +
           dash(detail::cell(r.avg_jitter_pct, "%.2f")) + " |\n";
  }
  return out;
}

inline std::string online_svg(const std::vector<OnlineRow>& rows) {
  std::vector<Bar> bars;
  std::optional<double> nominal;
  for (const OnlineRow& r : rows) {
    if (r.perturbation == kNominal && !nominal) nominal = r.avg_success_pct;
    const std::string label = rows.front().weather == r.weather ? r.perturbation : r.weather + "/" + r.perturbation;
    bars.push_back({label, r.avg_success_pct, nominal && r.avg_success_pct < *nominal - 20.0});
  }
  return bar_chart_svg("Average success rate", "%", bars, nominal);
}

// ---- offline ----

struct ImageResult {
  std::string perturbation;  // kind name or "nominal"
  int level = 0;             // 0 for nominal
  std::string image;
  std::optional<double> miou;  // empty when the image was skipped
  std::string error;
};

struct OfflineRow {
  std::string perturbation;
  std::string code;
  int images = 0;   // evaluated per level
  int skipped = 0;  // images the agent failed on, over all levels
  double avg = 0.0, stddev = 0.0, max = 0.0, min = 0.0;
  std::array<std::optional<double>, 5> per_level{};
};

inline std::vector<OfflineRow> aggregate_offline(const std::vector<ImageResult>& results) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const ImageResult*>> groups;
  for (const ImageResult& r : results) {
    if (!groups.count(r.perturbation)) order.push_back(r.perturbation);
    groups[r.perturbation].push_back(&r);
  }
  std::stable_partition(order.begin(), order.end(), [](const std::string& p) { return p == kNominal; });
  std::vector<OfflineRow> rows;
  for (const std::string& p : order) {
    OfflineRow row;
    row.perturbation = p;
    row.code = p == kNominal ? "-" : std::string(kind_code(parse_kind(p)));
    std::array<std::vector<double>, 6> by_level;
    for (const ImageResult* r : groups[p]) {
      if (r->miou) by_level[r->level].push_back(*r->miou);
      else ++row.skipped;
    }
    std::vector<double> level_means;
    for (int l = 0; l <= 5; ++l) {
      if (by_level[l].empty()) continue;
      const double m = detail::moments(by_level[l]).mean;
      level_means.push_back(m);
      if (l > 0) row.per_level[l - 1] = m;
      row.images = std::max(row.images, static_cast<int>(by_level[l].size()));
    }
    const auto m = detail::moments(level_means);
    row.avg = m.mean;
    row.stddev = m.stddev;
    row.max = m.max;
    row.min = m.min;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string offline_csv(const std::vector<OfflineRow>& rows) {
  std::string out = "perturbation,code,images,skipped,avg_iou,std_iou,max_iou,min_iou,iou_l1,iou_l2,iou_l3,iou_l4,iou_l5\n";
  for (const OfflineRow& r : rows) {
    out += r.perturbation + "," + r.code + "," + std::to_string(r.images) + "," + std::to_string(r.skipped) + "," +
           detail::cell(r.avg) + "," + detail::cell(r.stddev) + "," + detail::cell(r.max) + "," + detail::cell(r.min);
    for (const auto& v : r.per_level) out += "," + detail::cell(v);
    out += "\n";
  }
  return out;
}

inline std::string offline_markdown(const std::vector<OfflineRow>& rows, const std::string& agent) {
  std::string out = "# Offline results: " + agent +
                    "\n\n| Perturbation | Code | Images | Skipped | Avg | Std | Max | Min |\n"
                    "|---|---|---|---|---|---|---|---|\n";
  for (const OfflineRow& r : rows)
    out += "| " + r.perturbation + " | " + r.code + " | " + std::to_string(r.images) + " | " +
           std::to_string(r.skipped) + " | " + detail::cell(r.avg, "%.3f") + " | " + detail::cell(r.stddev, "%.3f") +
           " | " + detail::cell(r.max, "%.3f") + " | " + detail::cell(r.min, "%.3f") + " |\n";
  return out;
}

inline std::string offline_svg(const std::vector<OfflineRow>& rows) {
  std::vector<Bar> bars;
  std::optional<double> nominal;
  for (const OfflineRow& r : rows) {
    if (r.perturbation == kNominal) nominal = r.avg;
    bars.push_back({r.perturbation, r.avg, false});
  }
  return bar_chart_svg("Average mean IoU", "", bars, nominal);
}

// Per-image log, one line per (perturbation, level, image).
inline std::string offline_log_csv(const std::vector<ImageResult>& results) {
  std::string out = "perturbation,level,image,miou,error\n";
  for (const ImageResult& r : results) {
    std::string err = r.error;
    for (char& c : err)
      if (c == ',' || c == '\n' || c == '\r') c = ' ';
    out += r.perturbation + "," + std::to_string(r.level) + "," + r.image + "," + detail::cell(r.miou, "%.17g") +
           "," + err + "\n";
  }
  return out;
}

inline std::vector<ImageResult> offline_log_from_csv(const std::string& text) {
  std::vector<ImageResult> out;
  std::istringstream in(text);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line.rfind("perturbation,level,image,miou", 0) == 0,
          Errc::invalid_argument, "not an offline log");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    require(f.size() == 5, Errc::invalid_argument, "offline log line has " + std::to_string(f.size()) + " fields");
    ImageResult r{f[0], std::stoi(f[1]), f[2], std::nullopt, f[4]};
    if (!f[3].empty()) r.miou = std::stod(f[3]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace roadstress
