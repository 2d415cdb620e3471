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

// Entry point of the perturbation catalog.
//
// apply() converts the 8-bit input to float once, runs the kind-specific
// kernel with the level's parameters and quantizes once at the end. The
// random stream of every call is derived from (seed, kind index, level), so
// results do not depend on call order.

#include <cmath>
#include <string_view>

#include "roadstress/core/rng.hpp"
#include "roadstress/img/image.hpp"
#include "roadstress/perturb/affine.hpp"
#include "roadstress/perturb/blur.hpp"
#include "roadstress/perturb/catalog.hpp"
#include "roadstress/perturb/color.hpp"
#include "roadstress/perturb/distortion.hpp"
#include "roadstress/perturb/kinds.hpp"
#include "roadstress/perturb/noise.hpp"
#include "roadstress/perturb/pattern.hpp"
#include "roadstress/perturb/weather.hpp"

namespace roadstress {

inline Rng perturbation_stream(Seed seed, Kind kind, int level) {
  return Rng(derive_seed(seed.value, kind_index(kind) + 1, static_cast<std::uint64_t>(level)));
}

namespace detail {

inline int as_int(double v) { return static_cast<int>(std::lround(v)); }

}  // namespace detail

// Runs one kind with an explicit parameter vector on a float image.
inline FloatImage apply_params(Kind kind, FloatImage img, const ParamVector& p, Rng& rng) {
  require(p.size() == param_names(kind).size(), Errc::invalid_argument,
          std::string(kind_name(kind)) + ": wrong parameter count");
  using detail::as_int;
  namespace pt = perturb;
  switch (kind) {
    case Kind::gaussian_noise: pt::gaussian_noise(img, p[0], rng); return img;
    case Kind::poisson_noise: pt::poisson_noise(img, p[0], rng); return img;
    case Kind::impulse_noise: pt::impulse_noise(img, p[0], rng); return img;
    case Kind::jpeg_artifacts: pt::jpeg_artifacts(img, as_int(p[0])); return img;
    case Kind::speckle_noise: pt::speckle_noise(img, p[0], rng); return img;
    case Kind::defocus_blur: return pt::defocus_blur(img, p[0]);
    case Kind::motion_blur: return pt::motion_blur(img, p[0], p[1], p[2], rng);
    case Kind::zoom_blur: return pt::zoom_blur(img, p[0], as_int(p[1]));
    case Kind::gaussian_blur: return pt::gaussian_blur_op(img, p[0]);
    case Kind::low_pass: return pt::low_pass(img, as_int(p[0]));
    case Kind::frosted_glass: pt::frosted_glass(img, as_int(p[0]), as_int(p[1]), rng); return img;
    case Kind::snow: pt::snow(img, p[0], p[1], rng); return img;
    case Kind::fog: pt::fog(img, p[0]); return img;
    case Kind::brightness: pt::brightness(img, p[0]); return img;
    case Kind::contrast: pt::contrast(img, p[0]); return img;
    case Kind::elastic: return pt::elastic(img, p[0], p[1], rng);
    case Kind::pixelate: pt::pixelate(img, as_int(p[0])); return img;
    case Kind::sample_pairing: pt::sample_pairing(img, p[0], rng); return img;
    case Kind::sharpen: return pt::sharpen(img, p[0]);
    case Kind::scale: return pt::scale(img, p[0]);
    case Kind::translate: return pt::translate(img, p[0], rng);
    case Kind::splatter: pt::splatter(img, as_int(p[0]), p[1], p[2], rng); return img;
    case Kind::dotted_lines: pt::dotted_lines(img, as_int(p[0]), p[1], p[2], rng); return img;
    case Kind::zigzag: pt::zigzag(img, as_int(p[0]), as_int(p[1]), p[2], p[3], rng); return img;
    case Kind::canny_edges: pt::canny_edges(img, p[0], p[1]); return img;
    case Kind::cutout: pt::cutout(img, as_int(p[0]), p[1], rng); return img;
    case Kind::false_color: {
      const int mode = as_int(p[0]);
      require(mode >= 1 && mode <= 5, Errc::invalid_argument, "false_color mode must be 1..5");
      pt::false_color(img, static_cast<pt::FalseColorMode>(mode));
      return img;
    }
    case Kind::phase_scramble: pt::phase_scramble(img, p[0], rng); return img;
    case Kind::histogram_equalization: pt::histogram_equalization(img, p[0]); return img;
    case Kind::white_balance: pt::white_balance(img, p[0]); return img;
    case Kind::greyscale: pt::greyscale(img, p[0]); return img;
    case Kind::saturation_increase: pt::saturation(img, p[0]); return img;
    case Kind::saturation_decrease: pt::saturation(img, p[0]); return img;
    case Kind::posterize: pt::posterize(img, as_int(p[0])); return img;
  }
  fail(Errc::not_found, "unhandled perturbation kind");
}

// Applies an explicit parameter vector; the stream is derived as for `level`.
inline Image apply_with_params(Kind kind, const Image& img, const ParamVector& params, Seed seed,
                               IntensityLevel level = IntensityLevel(1)) {
  Rng rng = perturbation_stream(seed, kind, level.value());
  return quantize(apply_params(kind, to_float(img), params, rng));
}

inline Image apply(Kind kind, const Image& img, IntensityLevel level, Seed seed,
                   const Catalog& catalog = Catalog::builtin()) {
  return apply_with_params(kind, img, catalog.spec(kind).params(level), seed, level);
}

inline Image apply(std::string_view id, const Image& img, IntensityLevel level, Seed seed,
                   const Catalog& catalog = Catalog::builtin()) {
  return apply(parse_kind(id), img, level, seed, catalog);
}

}  // namespace roadstress
