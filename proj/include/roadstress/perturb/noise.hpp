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

#include <cmath>

#include "roadstress/core/rng.hpp"
#include "roadstress/img/image.hpp"
#include "roadstress/perturb/jpeg.hpp"

namespace roadstress::perturb {

// Samples are drawn plane by plane, row-major within each plane.

inline void gaussian_noise(FloatImage& img, double sigma, Rng& rng) {
  if (sigma == 0.0) return;
  for (float& v : img.samples()) v = static_cast<float>(v + sigma * rng.normal());
}

inline void poisson_noise(FloatImage& img, double lambda, Rng& rng) {
  for (float& v : img.samples()) {
    const double mean = std::max(0.0f, v) * lambda;
    v = static_cast<float>(static_cast<double>(rng.poisson(mean)) / lambda);
  }
}

// Each pixel is hit with probability `fraction`; a hit pixel becomes black
// or white (fair coin) in all channels. Draw order per pixel: one uniform,
// then one coin only on a hit.
inline void impulse_noise(FloatImage& img, double fraction, Rng& rng) {
  auto r = img.plane(0), g = img.plane(1), b = img.plane(2);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    if (rng.uniform() < fraction) {
      const float v = rng.coin() ? 1.0f : 0.0f;
      r[i] = g[i] = b[i] = v;
    }
  }
}

inline void speckle_noise(FloatImage& img, double sigma, Rng& rng) {
  if (sigma == 0.0) return;
  for (float& v : img.samples()) v = static_cast<float>(v + v * sigma * rng.normal());
}

}  // namespace roadstress::perturb
