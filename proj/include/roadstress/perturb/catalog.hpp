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

// The perturbation catalog: one record per kind with five per-level
// parameter vectors. The built-in table below is also the reference copy of
// config/catalog.txt; a catalog file in the same format overrides it.
//
// Format: '#' starts a comment. Each record is one line:
//
//   <code> <name> <category> <stochastic 0|1> <over_budget 0|1> | p1 | p2 | p3 | p4 | p5
//
// where each p is a comma-separated parameter vector whose meaning is
// fixed per kind (see param_names()).

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "roadstress/core/error.hpp"
#include "roadstress/perturb/kinds.hpp"

namespace roadstress {

using ParamVector = std::vector<double>;

struct PerturbationSpec {
  Kind kind;
  bool stochastic = false;
  // Excluded from online suites unless explicitly re-enabled.
  bool over_budget = false;
  std::array<ParamVector, 5> params_per_level;

  const ParamVector& params(IntensityLevel level) const { return params_per_level[level.index()]; }
};

inline std::vector<std::string_view> param_names(Kind kind) {
  switch (kind) {
    case Kind::gaussian_noise: return {"sigma"};
    case Kind::poisson_noise: return {"lambda"};
    case Kind::impulse_noise: return {"fraction"};
    case Kind::jpeg_artifacts: return {"quality"};
    case Kind::speckle_noise: return {"sigma"};
    case Kind::defocus_blur: return {"radius_px"};
    case Kind::motion_blur: return {"length_px", "angle_deg", "angle_jitter_deg"};
    case Kind::zoom_blur: return {"zoom", "copies"};
    case Kind::gaussian_blur: return {"sigma_px"};
    case Kind::low_pass: return {"kernel_px"};
    case Kind::frosted_glass: return {"radius_px", "passes"};
    case Kind::snow: return {"dots_per_76800px", "streak_px"};
    case Kind::fog: return {"blend"};
    case Kind::brightness: return {"offset"};
    case Kind::contrast: return {"gain"};
    case Kind::elastic: return {"alpha_px", "smoothing_sigma_px"};
    case Kind::pixelate: return {"block_px"};
    case Kind::sample_pairing: return {"alpha"};
    case Kind::sharpen: return {"strength"};
    case Kind::scale: return {"zoom"};
    case Kind::translate: return {"shift_fraction"};
    case Kind::splatter: return {"count", "min_radius_frac", "max_radius_frac"};
    case Kind::dotted_lines: return {"count", "spacing_px", "dot_radius_px"};
    case Kind::zigzag: return {"count", "vertices", "amplitude_frac", "half_width_px"};
    case Kind::canny_edges: return {"low_threshold", "high_threshold"};
    case Kind::cutout: return {"count", "area_frac_each"};
    case Kind::false_color: return {"mode"};
    case Kind::phase_scramble: return {"weight"};
    case Kind::histogram_equalization: return {"weight"};
    case Kind::white_balance: return {"weight"};
    case Kind::greyscale: return {"weight"};
    case Kind::saturation_increase: return {"factor"};
    case Kind::saturation_decrease: return {"factor"};
    case Kind::posterize: return {"bits"};
  }
  return {};
}

// Parameter setting under which a kind returns its input byte-identically.
// Kinds without such a setting return nullopt:
//  - poisson_noise: shot noise has no zero-variance rate;
//  - jpeg_artifacts: even quality 100 re-quantizes and subsamples chroma;
//  - false_color: every mode is a non-identity channel transform.
inline std::optional<ParamVector> neutral_params(Kind kind) {
  switch (kind) {
    case Kind::gaussian_noise: return ParamVector{0.0};
    case Kind::poisson_noise: return std::nullopt;
    case Kind::impulse_noise: return ParamVector{0.0};
    case Kind::jpeg_artifacts: return std::nullopt;
    case Kind::speckle_noise: return ParamVector{0.0};
    case Kind::defocus_blur: return ParamVector{0.0};
    case Kind::motion_blur: return ParamVector{1.0, 0.0, 15.0};
    case Kind::zoom_blur: return ParamVector{0.0, 10.0};
    case Kind::gaussian_blur: return ParamVector{0.0};
    case Kind::low_pass: return ParamVector{1.0};
    case Kind::frosted_glass: return ParamVector{0.0, 1.0};
    case Kind::snow: return ParamVector{0.0, 9.0};
    case Kind::fog: return ParamVector{0.0};
    case Kind::brightness: return ParamVector{0.0};
    case Kind::contrast: return ParamVector{1.0};
    case Kind::elastic: return ParamVector{0.0, 8.0};
    case Kind::pixelate: return ParamVector{1.0};
    case Kind::sample_pairing: return ParamVector{0.0};
    case Kind::sharpen: return ParamVector{0.0};
    case Kind::scale: return ParamVector{1.0};
    case Kind::translate: return ParamVector{0.0};
    case Kind::splatter: return ParamVector{0.0, 0.02, 0.06};
    case Kind::dotted_lines: return ParamVector{0.0, 6.0, 1.0};
    case Kind::zigzag: return ParamVector{0.0, 8.0, 0.04, 1.0};
    case Kind::canny_edges: return ParamVector{1e9, 1e9};
    case Kind::cutout: return ParamVector{0.0, 0.04};
    case Kind::false_color: return std::nullopt;
    case Kind::phase_scramble: return ParamVector{0.0};
    case Kind::histogram_equalization: return ParamVector{0.0};
    case Kind::white_balance: return ParamVector{0.0};
    case Kind::greyscale: return ParamVector{0.0};
    case Kind::saturation_increase: return ParamVector{1.0};
    case Kind::saturation_decrease: return ParamVector{1.0};
    case Kind::posterize: return ParamVector{8.0};
  }
  return std::nullopt;
}

// Level-5 endpoints are stand-ins for a visual-maximum calibration; levels
// 1..5 interpolate linearly between the per-kind endpoints (integer-valued
// parameters are rounded half up).
inline constexpr std::string_view kBuiltinCatalog = R"(# roadstress perturbation catalog, format version 1
# Level endpoints are stand-ins for a per-kind visual-maximum calibration;
# intermediate levels are uniform steps between the endpoints.
# code  name  category  stochastic  over_budget | level1 | level2 | level3 | level4 | level5
A-I    gaussian_noise          A 1 0 | 0.03 | 0.06 | 0.09 | 0.12 | 0.15
A-II   poisson_noise           A 1 0 | 120 | 93.75 | 67.5 | 41.25 | 15
A-III  impulse_noise           A 1 0 | 0.02 | 0.065 | 0.11 | 0.155 | 0.2
A-IV   jpeg_artifacts          A 0 0 | 60 | 47 | 34 | 21 | 8
A-V    speckle_noise           A 1 0 | 0.1 | 0.2 | 0.3 | 0.4 | 0.5
B-I    defocus_blur            B 0 0 | 1 | 2.25 | 3.5 | 4.75 | 6
B-II   motion_blur             B 1 0 | 3,0,15 | 6,0,15 | 9,0,15 | 12,0,15 | 15,0,15
B-III  zoom_blur               B 0 1 | 0.02,10 | 0.045,10 | 0.07,10 | 0.095,10 | 0.12,10
B-IV   gaussian_blur           B 0 0 | 0.5 | 1.25 | 2 | 2.75 | 3.5
B-V    low_pass                B 0 0 | 3 | 5 | 7 | 9 | 11
C-I    frosted_glass           C 1 0 | 1,1 | 2,2 | 3,2 | 3,3 | 4,3
C-II   snow                    C 1 0 | 100,5 | 375,7 | 650,9 | 925,11 | 1200,13
C-III  fog                     C 0 0 | 0.15 | 0.3 | 0.45 | 0.6 | 0.75
C-IV   brightness              C 0 0 | 0.08 | -0.16 | 0.24 | -0.32 | 0.4
C-V    contrast                C 0 0 | 1.2 | 1.5 | 1.8 | 2.1 | 2.4
D-I    elastic                 D 1 0 | 2,8 | 5,8 | 8,8 | 11,8 | 14,8
D-II   pixelate                D 0 0 | 2 | 6 | 9 | 13 | 16
D-III  sample_pairing          D 1 0 | 0.1 | 0.2 | 0.3 | 0.4 | 0.5
D-IV   sharpen                 D 0 0 | 0.5 | 1.125 | 1.75 | 2.375 | 3
E-II   scale                   E 0 0 | 1.1 | 1.225 | 1.35 | 1.475 | 1.6
E-III  translate               E 1 0 | 0.05 | 0.1 | 0.15 | 0.2 | 0.25
F-I    splatter                F 1 0 | 2,0.02,0.06 | 4,0.02,0.06 | 6,0.02,0.06 | 8,0.02,0.06 | 10,0.02,0.06
F-II   dotted_lines            F 1 0 | 2,6,1 | 4,6,1 | 6,6,1 | 8,6,1 | 10,6,1
F-III  zigzag                  F 1 0 | 1,8,0.04,1 | 2,8,0.04,1 | 3,8,0.04,1 | 4,8,0.04,1 | 5,8,0.04,1
F-IV   canny_edges             F 0 0 | 0.32,0.8 | 0.26,0.65 | 0.2,0.5 | 0.14,0.35 | 0.08,0.2
F-V    cutout                  F 1 0 | 1,0.04 | 2,0.04 | 3,0.04 | 4,0.04 | 5,0.04
G-I    false_color             G 0 0 | 1 | 2 | 3 | 4 | 5
G-II   phase_scramble          G 1 0 | 0.2 | 0.4 | 0.6 | 0.8 | 1
G-III  histogram_equalization  G 0 0 | 0.2 | 0.4 | 0.6 | 0.8 | 1
G-IV   white_balance           G 0 0 | 0.2 | 0.4 | 0.6 | 0.8 | 1
G-V    greyscale               G 0 0 | 0.2 | 0.4 | 0.6 | 0.8 | 1
G-VI   saturation_increase     G 0 0 | 1.25 | 1.6875 | 2.125 | 2.5625 | 3
G-VIb  saturation_decrease     G 0 0 | 0.8 | 0.6 | 0.4 | 0.2 | 0
G-VII  posterize               G 0 0 | 7 | 6 | 5 | 4 | 3
)";

class Catalog {
 public:
  static Catalog parse(std::string_view text) {
    Catalog catalog;
    std::array<bool, kKindCount> seen{};
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const std::string where = "catalog line " + std::to_string(line_no);

      std::vector<std::string> fields;
      {
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, '|')) fields.push_back(field);
      }
      require(fields.size() == 6, Errc::invalid_argument, where + ": expected header and 5 level fields");

      std::istringstream head(fields[0]);
      std::string code, name, category;
      int stochastic = -1, over_budget = -1;
      head >> code >> name >> category >> stochastic >> over_budget;
      require(static_cast<bool>(head) && (stochastic == 0 || stochastic == 1) &&
                  (over_budget == 0 || over_budget == 1),
              Errc::invalid_argument, where + ": malformed record header");
      const Kind kind = parse_kind(code);
      require(kind_name(kind) == name, Errc::invalid_argument,
              where + ": code " + code + " does not name " + name);
      require(category.size() == 1 && category[0] == static_cast<char>(info(kind).category),
              Errc::invalid_argument, where + ": wrong category for " + name);
      require(!seen[kind_index(kind)], Errc::invalid_argument, where + ": duplicate record " + name);
      seen[kind_index(kind)] = true;

      PerturbationSpec spec{kind, stochastic == 1, over_budget == 1, {}};
      const std::size_t arity = param_names(kind).size();
      for (std::size_t level = 0; level < 5; ++level) {
        std::istringstream ps(fields[level + 1]);
        std::string token;
        while (std::getline(ps, token, ',')) {
          char* end = nullptr;
          const double value = std::strtod(token.c_str(), &end);
          require(end != token.c_str() && std::string_view(end).find_first_not_of(" \t\r") ==
                                              std::string_view::npos,
                  Errc::invalid_argument, where + ": bad number '" + token + "'");
          spec.params_per_level[level].push_back(value);
        }
        require(spec.params_per_level[level].size() == arity, Errc::invalid_argument,
                where + ": " + name + " takes " + std::to_string(arity) + " parameters per level");
      }
      catalog.specs_[kind_index(kind)] = std::move(spec);
    }
    for (std::size_t i = 0; i < kKindCount; ++i)
      require(seen[i], Errc::invalid_argument,
              "catalog is missing " + std::string(kKindTable[i].name));
    return catalog;
  }

  static Catalog load(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), Errc::io_error, "cannot open catalog " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
  }

  static const Catalog& builtin() {
    static const Catalog catalog = parse(kBuiltinCatalog);
    return catalog;
  }

  const PerturbationSpec& spec(Kind kind) const { return *specs_[kind_index(kind)]; }

  std::string to_text() const {
    std::ostringstream out;
    out << "# roadstress perturbation catalog, format version 1\n";
    for (const auto& spec : specs_) {
      out << kind_code(spec->kind) << ' ' << kind_name(spec->kind) << ' '
          << static_cast<char>(info(spec->kind).category) << ' ' << (spec->stochastic ? 1 : 0)
          << ' ' << (spec->over_budget ? 1 : 0);
      for (const auto& params : spec->params_per_level) {
        out << " |";
        for (std::size_t i = 0; i < params.size(); ++i) out << (i ? "," : " ") << params[i];
      }
      out << '\n';
    }
    return out.str();
  }

 private:
  Catalog() = default;
  std::array<std::optional<PerturbationSpec>, kKindCount> specs_;
};

}  // namespace roadstress
