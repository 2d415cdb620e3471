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

// Suite configuration: a `key = value` text file, '#' starts a comment.
//
//   perturbations = all | nominal-only | <id>[,<id>...]   ids are names or codes
//   levels        = 1,2,3,4,5
//   roads         = presets | preset:<i>[-<j>] | <road file>[,<road file>...]
//   dataset       = <dir>          offline and augment inputs
//   weather       = nominal[,fog,...]
//   agent         = builtin:centroid | builtin:expert | builtin:constant:<steer>,<throttle>
//                 | builtin:echo | builtin:gt | tcp:<host>:<port> | exec:<command line>
//   timeout_s     = 200
//   dt            = 0.0333333333333333
//   seed          = 0
//   strict        = true           agent errors count as failures
//   include_over_budget = false    keep kinds flagged over budget (zoom blur)
//   deadline_ms   = 1000           per-frame reply deadline for remote agents
//   encoding      = raw_rgb_base64 | png_base64
//   workers       = 1
//   num_classes   = 0              0 = infer from the labels
//   embed_labels  = false          write class ids into the red channel (test mode)
//   catalog       = <file>         perturbation tables; builtin when empty
//   dump_frames   = false          write every perturbed frame as PNG (online)
//   augment_mode  = max_intensity | all_levels

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "roadstress/core/error.hpp"
#include "roadstress/perturb/catalog.hpp"
#include "roadstress/perturb/kinds.hpp"
#include "roadstress/road/road.hpp"
#include "roadstress/road/roadgen.hpp"
#include "roadstress/sim/render.hpp"

namespace roadstress {

struct SuiteConfig {
  std::string perturbations = "all";
  std::vector<int> levels{1, 2, 3, 4, 5};
  std::string roads = "presets";
  std::string dataset;
  std::vector<std::string> weather{"nominal"};
  std::string agent = "builtin:centroid";
  double timeout_s = 200.0;
  double dt = 1.0 / 30.0;
  std::uint64_t seed = 0;
  bool strict = true;
  bool include_over_budget = false;
  int deadline_ms = 1000;
  std::string encoding = "raw_rgb_base64";
  int workers = 1;
  int num_classes = 0;
  bool embed_labels = false;
  std::string catalog;
  bool dump_frames = false;
  std::string augment_mode = "max_intensity";
};

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(Errc::invalid_argument, "config key '" + key + "' expects true or false, got '" + v + "'");
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::logic_error&) {
  }
  fail(Errc::invalid_argument, "config key '" + key + "' expects a number, got '" + v + "'");
}

inline long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  require(ec == std::errc() && p == v.data() + v.size(), Errc::invalid_argument,
          "config key '" + key + "' expects an integer, got '" + v + "'");
  return out;
}

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline void validate(const SuiteConfig& c) {
  require(c.timeout_s > 0.0, Errc::invalid_argument, "timeout_s must be > 0");
  require(c.dt > 0.0, Errc::invalid_argument, "dt must be > 0");
  require(!c.levels.empty(), Errc::invalid_argument, "levels must not be empty");
  for (int l : c.levels) IntensityLevel{l};
  require(!c.perturbations.empty(), Errc::invalid_argument, "perturbation list is empty; use nominal-only");
  require(!c.weather.empty(), Errc::invalid_argument, "weather list must not be empty");
  for (const std::string& w : c.weather) find_weather(w);
  require(c.workers >= 1, Errc::invalid_argument, "workers must be >= 1");
  require(c.deadline_ms >= 1, Errc::invalid_argument, "deadline_ms must be >= 1");
  require(c.encoding == "raw_rgb_base64" || c.encoding == "png_base64", Errc::invalid_argument,
          "encoding must be raw_rgb_base64 or png_base64");
  require(c.num_classes == 0 || (c.num_classes >= 2 && c.num_classes <= 256), Errc::invalid_argument,
          "num_classes must be 0 or in [2, 256]");
  require(c.augment_mode == "max_intensity" || c.augment_mode == "all_levels", Errc::invalid_argument,
          "augment_mode must be max_intensity or all_levels");
}

inline SuiteConfig parse_suite_config(const std::string& text, SuiteConfig c = {}) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, Errc::invalid_argument,
            "config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string v = detail::trim(line.substr(eq + 1));
    if (key == "perturbations") c.perturbations = v;
    else if (key == "levels") {
      c.levels.clear();
      for (const auto& s : detail::split(v, ',')) c.levels.push_back(static_cast<int>(detail::parse_int(key, s)));
    } else if (key == "roads") c.roads = v;
    else if (key == "dataset") c.dataset = v;
    else if (key == "weather") c.weather = detail::split(v, ',');
    else if (key == "agent") c.agent = v;
    else if (key == "timeout_s") c.timeout_s = detail::parse_double(key, v);
    else if (key == "dt") c.dt = detail::parse_double(key, v);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(detail::parse_int(key, v));
    else if (key == "strict") c.strict = detail::parse_bool(key, v);
    else if (key == "include_over_budget") c.include_over_budget = detail::parse_bool(key, v);
    else if (key == "deadline_ms") c.deadline_ms = static_cast<int>(detail::parse_int(key, v));
    else if (key == "encoding") c.encoding = v;
    else if (key == "workers") c.workers = static_cast<int>(detail::parse_int(key, v));
    else if (key == "num_classes") c.num_classes = static_cast<int>(detail::parse_int(key, v));
    else if (key == "embed_labels") c.embed_labels = detail::parse_bool(key, v);
    else if (key == "catalog") c.catalog = v;
    else if (key == "dump_frames") c.dump_frames = detail::parse_bool(key, v);
    else if (key == "augment_mode") c.augment_mode = v;
    else fail(Errc::invalid_argument, "config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  validate(c);
  return c;
}

inline SuiteConfig load_suite_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  require(f.good(), Errc::io_error, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_suite_config(ss.str());
}

inline std::string to_text(const SuiteConfig& c) {
  std::ostringstream os;
  auto join_int = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
  };
  os << "perturbations = " << c.perturbations << "\n"
     << "levels = " << join_int(c.levels) << "\n"
     << "roads = " << c.roads << "\n"
     << "dataset = " << c.dataset << "\n"
     << "weather = " << join(c.weather) << "\n"
     << "agent = " << c.agent << "\n"
     << "timeout_s = " << detail::fmt_double(c.timeout_s) << "\n"
     << "dt = " << detail::fmt_double(c.dt) << "\n"
     << "seed = " << c.seed << "\n"
     << "strict = " << (c.strict ? "true" : "false") << "\n"
     << "include_over_budget = " << (c.include_over_budget ? "true" : "false") << "\n"
     << "deadline_ms = " << c.deadline_ms << "\n"
     << "encoding = " << c.encoding << "\n"
     << "workers = " << c.workers << "\n"
     << "num_classes = " << c.num_classes << "\n"
     << "embed_labels = " << (c.embed_labels ? "true" : "false") << "\n"
     << "catalog = " << c.catalog << "\n"
     << "dump_frames = " << (c.dump_frames ? "true" : "false") << "\n"
     << "augment_mode = " << c.augment_mode << "\n";
  return os.str();
}

// Resolved perturbation list, in catalog order for "all". Kinds flagged
// over budget are dropped from "all" unless re-enabled.
inline std::vector<Kind> resolve_kinds(const SuiteConfig& c, const Catalog& catalog) {
  std::vector<Kind> out;
  if (c.perturbations == "nominal-only") return out;
  if (c.perturbations == "all") {
    for (std::size_t i = 0; i < kKindCount; ++i) {
      const Kind k = static_cast<Kind>(i);
      if (!c.include_over_budget && catalog.spec(k).over_budget) continue;
      out.push_back(k);
    }
    return out;
  }
  for (const std::string& id : detail::split(c.perturbations, ',')) {
    const Kind k = parse_kind(id);
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  require(!out.empty(), Errc::invalid_argument, "perturbation list is empty; use nominal-only");
  return out;
}

struct NamedRoad {
  std::string name;
  Road road;
  std::uint64_t seed = 0;  // generator seed, 0 for file roads
};

inline std::vector<NamedRoad> resolve_roads(const SuiteConfig& c, const std::filesystem::path& base = {}) {
  std::vector<NamedRoad> out;
  auto add_presets = [&](int lo, int hi) {
    for (int i = lo; i <= hi; ++i) out.push_back({"preset" + std::to_string(i), preset_road(i), preset_config(i).seed});
  };
  if (c.roads == "presets") {
    add_presets(1, kPresetRoadCount);
    return out;
  }
  for (const std::string& item : detail::split(c.roads, ',')) {
    if (item.rfind("preset:", 0) == 0) {
      const std::string range = item.substr(7);
      const auto dash = range.find('-');
      const int lo = static_cast<int>(detail::parse_int("roads", range.substr(0, dash)));
      const int hi = dash == std::string::npos ? lo : static_cast<int>(detail::parse_int("roads", range.substr(dash + 1)));
      require(lo >= 1 && hi <= kPresetRoadCount && lo <= hi, Errc::invalid_argument, "bad preset range " + item);
      add_presets(lo, hi);
    } else {
      std::filesystem::path p(item);
      if (p.is_relative() && !base.empty()) p = base / p;
      out.push_back({p.stem().string(), load_road(p), 0});
    }
  }
  require(!out.empty(), Errc::invalid_argument, "no roads configured");
  return out;
}

}  // namespace roadstress
