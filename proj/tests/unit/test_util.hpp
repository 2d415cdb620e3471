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
#include <cmath>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "roadstress/core/rng.hpp"
#include "roadstress/img/image.hpp"
#include "roadstress/img/png_io.hpp"
#include "roadstress/road/roadgen.hpp"
#include "roadstress/sim/render.hpp"

namespace testutil {

using namespace roadstress;

inline Image noise_image(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  Image img(w, h);
  for (auto& b : img.data()) b = static_cast<std::uint8_t>(rng.below(256));
  return img;
}

// Smooth gradients plus a few hard shapes; stands in for a natural frame.
inline Image natural_image(int w = 320, int h = 240) {
  Image img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double u = static_cast<double>(x) / w, v = static_cast<double>(y) / h;
      std::array<std::uint8_t, 3> px{static_cast<std::uint8_t>(40 + 150 * u), static_cast<std::uint8_t>(60 + 120 * v),
                                     static_cast<std::uint8_t>(90 + 60 * std::sin(6.0 * u + 3.0 * v))};
      if ((x - w / 3) * (x - w / 3) + (y - h / 2) * (y - h / 2) < (h / 6) * (h / 6)) px = {220, 40, 30};
      if (x > 2 * w / 3 && x < 2 * w / 3 + w / 8 && y > h / 4 && y < 3 * h / 4) px = {20, 20, 200};
      img.set(x, y, px);
    }
  return img;
}

inline Image scene_image() {
  const Road road = preset_road(3);
  return render(start_state(road), road, weather_presets().front(), 0);
}

inline Image constant_image(int w, int h, std::uint8_t v) {
  Image img(w, h);
  std::fill(img.data().begin(), img.data().end(), v);
  return img;
}

// images/ and labels/ with n items; labels are blocks of classes 0..classes-1.
inline void write_seg_dataset(const std::filesystem::path& dir, int n, int w = 48, int h = 32, int classes = 4) {
  std::filesystem::create_directories(dir / "images");
  std::filesystem::create_directories(dir / "labels");
  for (int i = 0; i < n; ++i) {
    GreyImage label{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h)};
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) label.data[static_cast<std::size_t>(y) * w + x] = static_cast<std::uint8_t>((x / 8 + y / 8 + i) % classes);
    char name[32];
    std::snprintf(name, sizeof name, "item%03d.png", i);
    write_png(dir / "images" / name, noise_image(w, h, 1000 + i));
    write_grey_png(dir / "labels" / name, label);
  }
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("roadstress_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

#define EXPECT_ERRC(stmt, errc)                                  \
  do {                                                           \
    try {                                                        \
      stmt;                                                      \
      ADD_FAILURE() << "expected " << errc_name(errc);           \
    } catch (const ::roadstress::Error& e) {                     \
      EXPECT_EQ(e.code(), errc) << e.what();                     \
    }                                                            \
  } while (0)

}  // namespace testutil
