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

// Offline segmentation evaluation over a dataset laid out as
//   <dir>/images/<name>.png   RGB frames
//   <dir>/labels/<name>.png   8-bit grey class maps, same size

#include <filesystem>
#include <functional>

#include "roadstress/harness/agents.hpp"
#include "roadstress/harness/config.hpp"
#include "roadstress/harness/report.hpp"
#include "roadstress/img/png_io.hpp"
#include "roadstress/metrics/segmentation.hpp"
#include "roadstress/perturb/apply.hpp"

namespace roadstress {

struct SegSample {
  std::string name;  // file stem
  std::filesystem::path image, label;
};

inline std::vector<std::filesystem::path> list_pngs(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".png") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<SegSample> load_seg_dataset(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  require(fs::is_directory(dir / "images") && fs::is_directory(dir / "labels"), Errc::invalid_dataset,
          dir.string() + " needs images/ and labels/ subdirectories");
  std::vector<SegSample> out;
  for (const fs::path& img : list_pngs(dir / "images")) {
    const fs::path label = dir / "labels" / img.filename();
    require(fs::is_regular_file(label), Errc::invalid_dataset, "image " + img.filename().string() + " has no label");
    out.push_back({img.stem().string(), img, label});
  }
  for (const fs::path& label : list_pngs(dir / "labels"))
    require(fs::is_regular_file(dir / "images" / label.filename()), Errc::invalid_dataset,
            "label " + label.filename().string() + " has no image");
  require(!out.empty(), Errc::invalid_dataset, "dataset " + dir.string() + " has no images");
  return out;
}

inline SegMap read_label(const std::filesystem::path& path) {
  GreyImage g = read_grey_png(path);
  return SegMap(g.width, g.height, std::move(g.data));
}

// Seed for one (kind, level, item) of a static dataset.
inline Seed item_seed(std::uint64_t master, Kind kind, int level, std::size_t item) {
  return Seed{derive_seed(master, kind_index(kind) + 1, (static_cast<std::uint64_t>(level) << 32) | item)};
}

inline void embed_labels(Image& img, const SegMap& labels) {
  auto d = img.data();
  for (std::size_t i = 0; i < labels.classes.size(); ++i) d[3 * i] = labels.classes[i];
}

struct OfflineRun {
  int num_classes = 0;
  std::vector<ImageResult> results;
  std::vector<OfflineRow> rows;
};

using OfflineProgress = std::function<void(const ImageResult&)>;

inline OfflineRun run_offline(const SuiteConfig& cfg, const std::vector<SegSample>& dataset, SegmentationAgent& agent,
                              const Catalog& catalog = Catalog::builtin(), const OfflineProgress& progress = {}) {
  validate(cfg);
  struct Loaded {
    Image image;
    SegMap label;
  };
  std::vector<Loaded> items;
  int max_class = 1;
  for (const SegSample& s : dataset) {
    Loaded l{read_png(s.image), read_label(s.label)};
    require(l.image.width() == l.label.width && l.image.height() == l.label.height, Errc::invalid_dataset,
            "label " + s.label.filename().string() + " does not match its image size");
    for (std::uint8_t c : l.label.classes) max_class = std::max<int>(max_class, c);
    items.push_back(std::move(l));
  }
  OfflineRun run;
  run.num_classes = cfg.num_classes ? cfg.num_classes : max_class + 1;
  for (const Loaded& l : items)
    for (std::uint8_t c : l.label.classes)
      require(c < run.num_classes, Errc::invalid_dataset, "label class " + std::to_string(c) + " >= num_classes");

  SuiteConfig all = cfg;
  all.include_over_budget = true;  // no frame budget offline
  const std::vector<Kind> kinds = resolve_kinds(all, catalog);
  std::uint64_t request = 0;
  auto evaluate = [&](const std::string& pert, int level, std::size_t i, Image img) {
    const SegSample& s = dataset[i];
    if (agent.wants_embedded_labels()) embed_labels(img, items[i].label);
    ImageResult r{pert, level, s.name, std::nullopt, {}};
    try {
      const SegMap pred = agent.segment(img, items[i].label, s.name + "/" + pert + "/L" + std::to_string(level), request++);
      require(pred.width == img.width() && pred.height == img.height(), Errc::agent_error,
              "segmentation size does not match the frame");
      r.miou = mean_iou(pred, items[i].label, run.num_classes);
    } catch (const Error& e) {
      if (e.code() == Errc::disconnect) throw;
      r.error = std::string(errc_name(e.code())) + ": " + e.what();
    }
    if (progress) progress(r);
    run.results.push_back(std::move(r));
  };
  for (std::size_t i = 0; i < items.size(); ++i) evaluate(kNominal, 0, i, items[i].image);
  for (Kind k : kinds)
    for (int level : cfg.levels)
      for (std::size_t i = 0; i < items.size(); ++i)
        evaluate(std::string(kind_name(k)), level, i,
                 apply(k, items[i].image, IntensityLevel(level), item_seed(cfg.seed, k, level, i), catalog));
  run.rows = aggregate_offline(run.results);
  return run;
}

}  // namespace roadstress
