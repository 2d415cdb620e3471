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
#include <array>
#include <cmath>

#include "roadstress/img/image.hpp"

namespace roadstress {

// HSV with all three components in [0, 1]; hue is degrees / 360.
// Achromatic pixels get hue 0.
struct Hsv {
  double h, s, v;
};

inline Hsv rgb_to_hsv(double r, double g, double b) {
  r = std::clamp(r, 0.0, 1.0);
  g = std::clamp(g, 0.0, 1.0);
  b = std::clamp(b, 0.0, 1.0);
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double d = mx - mn;
  Hsv out{0.0, mx > 0.0 ? d / mx : 0.0, mx};
  if (d > 0.0) {
    double h;
    if (mx == r) {
      h = (g - b) / d;
      if (h < 0.0) h += 6.0;
    } else if (mx == g) {
      h = (b - r) / d + 2.0;
    } else {
      h = (r - g) / d + 4.0;
    }
    h /= 6.0;
    out.h = h >= 1.0 ? 0.0 : h;
  }
  return out;
}

inline std::array<double, 3> hsv_to_rgb(Hsv in) {
  const double h = std::clamp(in.h, 0.0, 1.0);
  const double s = std::clamp(in.s, 0.0, 1.0);
  const double v = std::clamp(in.v, 0.0, 1.0);
  if (s == 0.0) return {v, v, v};
  double hh = h * 6.0;
  if (hh >= 6.0) hh = 0.0;
  const int sector = static_cast<int>(hh);
  const double f = hh - sector;
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double t = v * (1.0 - s * (1.0 - f));
  switch (sector) {
    case 0: return {v, t, p};
    case 1: return {q, v, p};
    case 2: return {p, v, t};
    case 3: return {p, q, v};
    case 4: return {t, p, v};
    default: return {v, p, q};
  }
}

// Image-level conversions. The HSV image stores H, S, V in planes 0, 1, 2.
inline FloatImage rgb_to_hsv(const FloatImage& img) {
  FloatImage out(img.width(), img.height());
  const auto r = img.plane(0), g = img.plane(1), b = img.plane(2);
  auto h = out.plane(0), s = out.plane(1), v = out.plane(2);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const Hsv px = rgb_to_hsv(r[i], g[i], b[i]);
    h[i] = static_cast<float>(px.h);
    s[i] = static_cast<float>(px.s);
    v[i] = static_cast<float>(px.v);
  }
  return out;
}

inline FloatImage hsv_to_rgb(const FloatImage& img) {
  FloatImage out(img.width(), img.height());
  const auto h = img.plane(0), s = img.plane(1), v = img.plane(2);
  auto r = out.plane(0), g = out.plane(1), b = out.plane(2);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const auto rgb = hsv_to_rgb(Hsv{h[i], s[i], v[i]});
    r[i] = static_cast<float>(rgb[0]);
    g[i] = static_cast<float>(rgb[1]);
    b[i] = static_cast<float>(rgb[2]);
  }
  return out;
}

// Multiplies HSV saturation by `factor` (clamped to [0, 1]) in place.
inline void scale_saturation(FloatImage& img, double factor) {
  auto r = img.plane(0), g = img.plane(1), b = img.plane(2);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    Hsv px = rgb_to_hsv(r[i], g[i], b[i]);
    px.s = std::clamp(px.s * factor, 0.0, 1.0);
    const auto rgb = hsv_to_rgb(px);
    r[i] = static_cast<float>(rgb[0]);
    g[i] = static_cast<float>(rgb[1]);
    b[i] = static_cast<float>(rgb[2]);
  }
}

}  // namespace roadstress
