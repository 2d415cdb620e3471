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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "roadstress/core/rng.hpp"
#include "roadstress/img/convolve.hpp"
#include "roadstress/img/image.hpp"
#include "roadstress/img/warp.hpp"

namespace roadstress::perturb {

// Largest kernel radius that still fits the image (kernel side < both sides).
inline int max_fitting_radius(const FloatImage& img) {
  return std::max(0, (std::min(img.width(), img.height()) - 2) / 2);
}

inline FloatImage defocus_blur(const FloatImage& img, double radius) {
  radius = std::min(radius, static_cast<double>(max_fitting_radius(img)));
  const Kernel kernel = Kernel::disc(radius);
  if (kernel.size() == 1) return img;
  return convolve2d(img, kernel);
}

inline FloatImage motion_blur(const FloatImage& img, double length, double angle_deg) {
  length = std::min(length, static_cast<double>(2 * max_fitting_radius(img) - 1));
  const Kernel kernel = Kernel::line(length, angle_deg * std::numbers::pi / 180.0);
  if (kernel.size() == 1) return img;
  return convolve2d(img, kernel);
}

// Angle jitter is the only seeded part of motion blur.
inline FloatImage motion_blur(const FloatImage& img, double length, double angle_deg,
                              double jitter_deg, Rng& rng) {
  const double angle = angle_deg + jitter_deg * (2.0 * rng.uniform() - 1.0);
  return motion_blur(img, length, angle);
}

// Radial blur: each output pixel is the mean of `copies` bicubic samples
// taken on the ray towards the image center, i.e. the mean of center zooms
// with factors evenly spaced in [1, 1 + zoom].
inline FloatImage zoom_blur(const FloatImage& img, double zoom, int copies) {
  copies = std::max(1, copies);
  const int w = img.width(), h = img.height();
  std::vector<double> inv_factor(copies);
  for (int i = 0; i < copies; ++i) {
    const double factor = copies == 1 ? 1.0 + zoom : 1.0 + zoom * i / (copies - 1);
    inv_factor[i] = 1.0 / factor;
  }
  const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
  const float inv = 1.0f / static_cast<float>(copies);
  FloatImage out(w, h);
  auto r = out.plane(0), g = out.plane(1), b = out.plane(2);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc[3] = {0.0f, 0.0f, 0.0f};
      for (int i = 0; i < copies; ++i) {
        float s[3];
        sample_bicubic(img, cx + (x - cx) * inv_factor[i], cy + (y - cy) * inv_factor[i], s);
        acc[0] += s[0];
        acc[1] += s[1];
        acc[2] += s[2];
      }
      const std::size_t k = static_cast<std::size_t>(y) * w + x;
      r[k] = acc[0] * inv;
      g[k] = acc[1] * inv;
      b[k] = acc[2] * inv;
    }
  }
  return out;
}

inline FloatImage gaussian_blur_op(const FloatImage& img, double sigma) {
  sigma = std::min(sigma, max_fitting_radius(img) / 3.0);
  return gaussian_blur(img, sigma);
}

inline FloatImage low_pass(const FloatImage& img, int size) {
  size = std::min(size, 2 * max_fitting_radius(img) + 1);
  if (size % 2 == 0) --size;
  if (size <= 1) return img;
  const auto taps = box_taps(size);
  return convolve_separable(img, taps, taps);
}

}  // namespace roadstress::perturb
