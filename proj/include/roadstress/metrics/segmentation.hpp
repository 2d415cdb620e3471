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

// Segmentation maps and IoU.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roadstress/core/error.hpp"

namespace roadstress {

struct SegMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> classes;

  SegMap() = default;
  SegMap(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), classes(static_cast<std::size_t>(w) * h, fill) {
    require(w > 0 && h > 0, Errc::invalid_argument, "segmentation map must be non-empty");
  }
  SegMap(int w, int h, std::vector<std::uint8_t> data) : width(w), height(h), classes(std::move(data)) {
    require(w > 0 && h > 0, Errc::invalid_argument, "segmentation map must be non-empty");
    require(classes.size() == static_cast<std::size_t>(w) * h, Errc::invalid_argument,
            "segmentation map size does not match its dimensions");
  }

  std::uint8_t at(int x, int y) const { return classes[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return classes[static_cast<std::size_t>(y) * width + x]; }
  bool operator==(const SegMap&) const = default;
};

// One entry per class; nullopt marks a class absent from both maps.
using ClassIoU = std::vector<std::optional<double>>;

struct ConfusionCounts {
  std::vector<std::uint64_t> intersection, pred, gt;
};

inline ConfusionCounts count_classes(const SegMap& pred, const SegMap& gt, int num_classes) {
  require(num_classes >= 2 && num_classes <= 256, Errc::invalid_argument, "num_classes must be in [2, 256]");
  require(pred.width == gt.width && pred.height == gt.height, Errc::invalid_argument,
          "segmentation maps differ in size: " + std::to_string(pred.width) + "x" + std::to_string(pred.height) +
              " vs " + std::to_string(gt.width) + "x" + std::to_string(gt.height));
  ConfusionCounts c{std::vector<std::uint64_t>(num_classes), std::vector<std::uint64_t>(num_classes),
                    std::vector<std::uint64_t>(num_classes)};
  for (std::size_t i = 0; i < pred.classes.size(); ++i) {
    const int p = pred.classes[i], g = gt.classes[i];
    require(p < num_classes && g < num_classes, Errc::invalid_argument, "class id out of range");
    ++c.pred[p];
    ++c.gt[g];
    if (p == g) ++c.intersection[p];
  }
  return c;
}

inline ClassIoU iou_per_class(const SegMap& pred, const SegMap& gt, int num_classes) {
  const ConfusionCounts c = count_classes(pred, gt, num_classes);
  ClassIoU out(num_classes);
  for (int k = 0; k < num_classes; ++k) {
    const std::uint64_t uni = c.pred[k] + c.gt[k] - c.intersection[k];
    if (uni > 0) out[k] = static_cast<double>(c.intersection[k]) / static_cast<double>(uni);
  }
  return out;
}

inline double mean_iou(const ClassIoU& per_class) {
  double sum = 0.0;
  int n = 0;
  for (const auto& v : per_class) {
    if (!v) continue;
    sum += *v;
    ++n;
  }
  require(n > 0, Errc::undefined_metric, "mean IoU undefined: no class present");
  return sum / n;
}

inline double mean_iou(const SegMap& pred, const SegMap& gt, int num_classes) {
  return mean_iou(iou_per_class(pred, gt, num_classes));
}

}  // namespace roadstress
