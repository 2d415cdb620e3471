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

// Augmented dataset export. Two source layouts are understood:
//   segmentation  images/<name>.png + labels/<name>.png
//   driving       samples/NNNNNN.png + labels.csv (row i labels sample i)
// Output keeps the source layout. Originals are copied, perturbed copies are
// added, and labels are copied byte-for-byte from their source.

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "roadstress/harness/offline.hpp"
#include "roadstress/img/png_io.hpp"
#include "roadstress/perturb/apply.hpp"

namespace roadstress {

enum class AugmentMode { max_intensity, all_levels };

inline AugmentMode parse_augment_mode(const std::string& s) {
  if (s == "max_intensity") return AugmentMode::max_intensity;
  if (s == "all_levels") return AugmentMode::all_levels;
  fail(Errc::invalid_argument, "augment mode must be max_intensity or all_levels, got '" + s + "'");
}

inline std::string_view augment_mode_name(AugmentMode m) {
  return m == AugmentMode::max_intensity ? "max_intensity" : "all_levels";
}

struct AugmentSummary {
  std::string layout;
  std::size_t source_items = 0;
  std::size_t images = 0;
  std::size_t labels = 0;
  std::vector<std::string> files;  // relative to the output dir
};

namespace detail {

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  require(f.good(), Errc::io_error, "cannot read " + p.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  f << text;
  f.flush();
  require(f.good(), Errc::io_error, "cannot write " + p.string());
}

inline void copy_bytes(const std::filesystem::path& from, const std::filesystem::path& to) {
  write_file_bytes(to, read_file_bytes(from));
}

}  // namespace detail

inline AugmentSummary export_augmented(const std::filesystem::path& src, const std::vector<Kind>& kinds,
                                       AugmentMode mode, const std::filesystem::path& out, std::uint64_t seed,
                                       const Catalog& catalog = Catalog::builtin()) {
  namespace fs = std::filesystem;
  std::vector<int> levels = mode == AugmentMode::max_intensity ? std::vector<int>{5} : std::vector<int>{1, 2, 3, 4, 5};
  AugmentSummary sum;
  auto write_manifest = [&](bool complete, const std::string& error) {
    nlohmann::json m = {{"tool", "roadstress"}, {"command", "augment"},     {"source", fs::absolute(src).string()},
                        {"mode", augment_mode_name(mode)},                  {"seed", seed},
                        {"layout", sum.layout}, {"complete", complete},     {"error", error},
                        {"source_items", sum.source_items},                 {"images", sum.images},
                        {"labels", sum.labels}, {"files", sum.files}};
    nlohmann::json ks = nlohmann::json::array();
    for (Kind k : kinds) ks.push_back(kind_name(k));
    m["perturbations"] = ks;
    detail::write_text(out / "augment_manifest.json", m.dump(2) + "\n");
  };
  try {
    fs::create_directories(out);
    if (fs::is_directory(src / "images")) {
      sum.layout = "segmentation";
      const auto samples = load_seg_dataset(src);
      sum.source_items = samples.size();
      fs::create_directories(out / "images");
      fs::create_directories(out / "labels");
      auto emit_label = [&](const SegSample& s, const std::string& name) {
        detail::copy_bytes(s.label, out / "labels" / (name + ".png"));
        sum.files.push_back("labels/" + name + ".png");
        ++sum.labels;
      };
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const SegSample& s = samples[i];
        detail::copy_bytes(s.image, out / "images" / (s.name + ".png"));
        sum.files.push_back("images/" + s.name + ".png");
        ++sum.images;
        emit_label(s, s.name);
        const Image img = read_png(s.image);
        for (Kind k : kinds)
          for (int level : levels) {
            const std::string name = s.name + "__" + std::string(kind_name(k)) + "_L" + std::to_string(level);
            write_png(out / "images" / (name + ".png"),
                      apply(k, img, IntensityLevel(level), item_seed(seed, k, level, i), catalog));
            sum.files.push_back("images/" + name + ".png");
            ++sum.images;
            emit_label(s, name);
          }
      }
    } else if (fs::is_directory(src / "samples") && fs::is_regular_file(src / "labels.csv")) {
      sum.layout = "driving";
      std::istringstream in(detail::read_text(src / "labels.csv"));
      std::string header, line;
      require(static_cast<bool>(std::getline(in, header)), Errc::invalid_dataset, "labels.csv is empty");
      std::vector<std::string> rows;
      while (std::getline(in, line))
        if (!line.empty()) rows.push_back(line);
      const auto pngs = list_pngs(src / "samples");
      require(pngs.size() == rows.size(), Errc::invalid_dataset,
              "labels.csv has " + std::to_string(rows.size()) + " rows for " + std::to_string(pngs.size()) + " samples");
      sum.source_items = rows.size();
      fs::create_directories(out / "samples");
      std::string labels = header + "\n";
      std::string index = "frame,source_frame,perturbation,level\n";
      std::size_t next = 0;
      char name[32];
      auto emit = [&](std::size_t i, const std::string& pert, int level) {
        std::snprintf(name, sizeof name, "%06zu.png", next);
        sum.files.push_back(std::string("samples/") + name);
        const auto comma = rows[i].find(',');
        labels += std::to_string(next) + (comma == std::string::npos ? std::string() : rows[i].substr(comma)) + "\n";
        index += std::to_string(next) + "," + std::to_string(i) + "," + pert + "," + std::to_string(level) + "\n";
        ++next;
        ++sum.images;
        ++sum.labels;
      };
      for (std::size_t i = 0; i < rows.size(); ++i) {
        emit(i, "none", 0);
        detail::copy_bytes(pngs[i], out / sum.files.back());
        const Image img = read_png(pngs[i]);
        for (Kind k : kinds)
          for (int level : levels) {
            emit(i, std::string(kind_name(k)), level);
            write_png(out / sum.files.back(), apply(k, img, IntensityLevel(level), item_seed(seed, k, level, i), catalog));
          }
      }
      detail::write_text(out / "labels.csv", labels);
      detail::write_text(out / "augment_index.csv", index);
      sum.files.push_back("labels.csv");
      sum.files.push_back("augment_index.csv");
    } else {
      fail(Errc::invalid_dataset, src.string() + " is neither a segmentation nor a driving dataset");
    }
  } catch (const Error& e) {
    try {
      write_manifest(false, std::string(errc_name(e.code())) + ": " + e.what());
    } catch (const Error&) {
    }
    throw;
  } catch (const fs::filesystem_error& e) {
    try {
      write_manifest(false, std::string("io-error: ") + e.what());
    } catch (const Error&) {
    }
    fail(Errc::io_error, e.what());
  }
  write_manifest(true, "");
  return sum;
}

}  // namespace roadstress
