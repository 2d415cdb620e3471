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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "roadstress/core/error.hpp"

namespace roadstress {

enum class Category : char {
  noise = 'A',
  blur = 'B',
  weather = 'C',
  distortion = 'D',
  affine = 'E',
  pattern = 'F',
  color = 'G',
};

// Catalog order is stable: the index of a kind feeds RNG stream derivation.
enum class Kind : std::uint8_t {
  gaussian_noise,
  poisson_noise,
  impulse_noise,
  jpeg_artifacts,
  speckle_noise,
  defocus_blur,
  motion_blur,
  zoom_blur,
  gaussian_blur,
  low_pass,
  frosted_glass,
  snow,
  fog,
  brightness,
  contrast,
  elastic,
  pixelate,
  sample_pairing,
  sharpen,
  scale,
  translate,
  splatter,
  dotted_lines,
  zigzag,
  canny_edges,
  cutout,
  false_color,
  phase_scramble,
  histogram_equalization,
  white_balance,
  greyscale,
  saturation_increase,
  saturation_decrease,
  posterize,
};

inline constexpr std::size_t kKindCount = 34;

struct KindInfo {
  Kind kind;
  std::string_view code;
  std::string_view name;
  Category category;
};

inline constexpr std::array<KindInfo, kKindCount> kKindTable{{
    {Kind::gaussian_noise, "A-I", "gaussian_noise", Category::noise},
    {Kind::poisson_noise, "A-II", "poisson_noise", Category::noise},
    {Kind::impulse_noise, "A-III", "impulse_noise", Category::noise},
    {Kind::jpeg_artifacts, "A-IV", "jpeg_artifacts", Category::noise},
    {Kind::speckle_noise, "A-V", "speckle_noise", Category::noise},
    {Kind::defocus_blur, "B-I", "defocus_blur", Category::blur},
    {Kind::motion_blur, "B-II", "motion_blur", Category::blur},
    {Kind::zoom_blur, "B-III", "zoom_blur", Category::blur},
    {Kind::gaussian_blur, "B-IV", "gaussian_blur", Category::blur},
    {Kind::low_pass, "B-V", "low_pass", Category::blur},
    {Kind::frosted_glass, "C-I", "frosted_glass", Category::weather},
    {Kind::snow, "C-II", "snow", Category::weather},
    {Kind::fog, "C-III", "fog", Category::weather},
    {Kind::brightness, "C-IV", "brightness", Category::weather},
    {Kind::contrast, "C-V", "contrast", Category::weather},
    {Kind::elastic, "D-I", "elastic", Category::distortion},
    {Kind::pixelate, "D-II", "pixelate", Category::distortion},
    {Kind::sample_pairing, "D-III", "sample_pairing", Category::distortion},
    {Kind::sharpen, "D-IV", "sharpen", Category::distortion},
    {Kind::scale, "E-II", "scale", Category::affine},
    {Kind::translate, "E-III", "translate", Category::affine},
    {Kind::splatter, "F-I", "splatter", Category::pattern},
    {Kind::dotted_lines, "F-II", "dotted_lines", Category::pattern},
    {Kind::zigzag, "F-III", "zigzag", Category::pattern},
    {Kind::canny_edges, "F-IV", "canny_edges", Category::pattern},
    {Kind::cutout, "F-V", "cutout", Category::pattern},
    {Kind::false_color, "G-I", "false_color", Category::color},
    {Kind::phase_scramble, "G-II", "phase_scramble", Category::color},
    {Kind::histogram_equalization, "G-III", "histogram_equalization", Category::color},
    {Kind::white_balance, "G-IV", "white_balance", Category::color},
    {Kind::greyscale, "G-V", "greyscale", Category::color},
    {Kind::saturation_increase, "G-VI", "saturation_increase", Category::color},
    {Kind::saturation_decrease, "G-VIb", "saturation_decrease", Category::color},
    {Kind::posterize, "G-VII", "posterize", Category::color},
}};

// Kinds known from the literature that the catalog deliberately refuses:
// they either destroy the driving scene or need pretrained generators.
struct ExcludedKind {
  std::string_view code;
  std::string_view name;
};

inline constexpr std::array<ExcludedKind, 5> kExcludedKinds{{
    {"E-I", "shear"},
    {"E-IV", "rotate"},
    {"E-V", "reflection"},
    {"H-I", "cycle_gan"},
    {"H-II", "style_transfer"},
}};

inline constexpr std::size_t kind_index(Kind kind) { return static_cast<std::size_t>(kind); }

inline constexpr const KindInfo& info(Kind kind) { return kKindTable[kind_index(kind)]; }

inline constexpr std::string_view kind_name(Kind kind) { return info(kind).name; }

inline constexpr std::string_view kind_code(Kind kind) { return info(kind).code; }

inline std::optional<Kind> find_kind(std::string_view id) {
  for (const auto& entry : kKindTable)
    if (entry.name == id || entry.code == id) return entry.kind;
  return std::nullopt;
}

// Resolves a name or code. Excluded kinds raise unsupported-perturbation,
// anything else unknown raises not-found.
inline Kind parse_kind(std::string_view id) {
  if (auto kind = find_kind(id)) return *kind;
  for (const auto& excluded : kExcludedKinds)
    if (excluded.name == id || excluded.code == id)
      fail(Errc::unsupported_perturbation,
           std::string(excluded.code) + " " + std::string(excluded.name) + " is not supported");
  fail(Errc::not_found, "unknown perturbation '" + std::string(id) + "'");
}

class IntensityLevel {
 public:
  constexpr explicit IntensityLevel(int level) : level_(level) {
    if (level < 1 || level > 5) fail(Errc::invalid_argument, "intensity level must be in 1..5");
  }
  constexpr int value() const { return level_; }
  constexpr std::size_t index() const { return static_cast<std::size_t>(level_ - 1); }
  constexpr bool operator==(const IntensityLevel&) const = default;

 private:
  int level_;
};

}  // namespace roadstress
