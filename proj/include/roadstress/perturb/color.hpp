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
#include <numbers>
#include <vector>

#include "roadstress/core/rng.hpp"
#include "roadstress/img/color.hpp"
#include "roadstress/img/fft.hpp"
#include "roadstress/img/image.hpp"

namespace roadstress::perturb {

enum class FalseColorMode {
  swap_red_blue = 1,   // RGB -> BGR
  swap_red_green = 2,  // RGB -> GRB
  average_pairs = 3,   // (R+G)/2, (G+B)/2, (B+R)/2
  invert_red = 4,
  invert_all = 5,
};

inline void false_color(FloatImage& img, FalseColorMode mode) {
  auto r = img.plane(0), g = img.plane(1), b = img.plane(2);
  const std::size_t n = img.pixel_count();
  switch (mode) {
    case FalseColorMode::swap_red_blue:
      std::swap_ranges(r.begin(), r.end(), b.begin());
      break;
    case FalseColorMode::swap_red_green:
      std::swap_ranges(r.begin(), r.end(), g.begin());
      break;
    case FalseColorMode::average_pairs:
      for (std::size_t i = 0; i < n; ++i) {
        const float R = r[i], G = g[i], B = b[i];
        r[i] = 0.5f * (R + G);
        g[i] = 0.5f * (G + B);
        b[i] = 0.5f * (B + R);
      }
      break;
    case FalseColorMode::invert_red:
      for (float& v : r) v = 1.0f - v;
      break;
    case FalseColorMode::invert_all:
      for (float& v : img.samples()) v = 1.0f - v;
      break;
  }
}

namespace detail {

// Random phases for every conjugate pair of one channel, drawn in raster
// order of the pair's first bin.
inline std::vector<double> draw_pair_phases(int w, int h, Rng& rng) {
  std::vector<double> phases;
  phases.reserve(static_cast<std::size_t>(w) * h / 2 + 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t k = static_cast<std::size_t>(y) * w + x;
      const std::size_t pk = static_cast<std::size_t>((h - y) % h) * w + (w - x) % w;
      if (pk > k) phases.push_back(rng.uniform(-std::numbers::pi, std::numbers::pi));
    }
  return phases;
}

// Magnitude of z on the unit phasor of `phase`. The trig runs in single
// precision; the result is quantized to 8 bits downstream.
inline Complex rephase(const Complex& z, double weight, double phase) {
  const double mag = std::sqrt(z.real() * z.real() + z.imag() * z.imag());
  const float target =
      weight == 1.0 ? static_cast<float>(phase)
                    : static_cast<float>((1.0 - weight) * std::atan2(static_cast<float>(z.imag()),
                                                                     static_cast<float>(z.real())) +
                                         weight * phase);
  float sn, cs;
  ::sincosf(target, &sn, &cs);
  return {mag * cs, mag * sn};
}

}  // namespace detail

// Per channel: keep the magnitude spectrum, move every phase toward a
// seeded random phase by `weight`. Random phases are Hermitian-symmetrized
// (one draw per conjugate pair, self-conjugate bins untouched) so the
// inverse is real. Channels are transformed two at a time as the real and
// imaginary parts of one complex plane. Returns the unclamped planes.
inline std::array<std::vector<double>, 3> phase_scramble_planes(const FloatImage& img, double weight,
                                                                Rng& rng) {
  const int w = img.width(), h = img.height();
  const std::size_t n = img.pixel_count();
  std::array<std::vector<double>, 3> phases;
  for (int c = 0; c < 3; ++c) phases[c] = detail::draw_pair_phases(w, h, rng);
  std::array<std::vector<double>, 3> out;
  ComplexPlane z{w, h, std::vector<Complex>(n)};
  for (int c0 = 0; c0 < 3; c0 += 2) {
    const bool pair = c0 + 1 < 3;
    const auto a = img.plane(c0);
    if (pair) {
      const auto b = img.plane(c0 + 1);
      for (std::size_t i = 0; i < n; ++i) z.data[i] = Complex(a[i], b[i]);
    } else {
      for (std::size_t i = 0; i < n; ++i) z.data[i] = Complex(a[i], 0.0);
    }
    roadstress::detail::fft2_in_place(z, false);
    // Split each conjugate pair into the two channel spectra, rephase both
    // and recombine. Self-conjugate bins stay as they are.
    std::size_t m = 0;
    for (int y = 0; y < h; ++y) {
      const std::size_t py = static_cast<std::size_t>((h - y) % h) * w;
      for (int x = 0; x < w; ++x) {
        const std::size_t k = static_cast<std::size_t>(y) * w + x;
        const std::size_t pk = py + (w - x) % w;
        if (pk <= k) continue;
        const Complex zk = z.data[k], zc = std::conj(z.data[pk]);
        const Complex sa(0.5 * (zk.real() + zc.real()), 0.5 * (zk.imag() + zc.imag()));
        // (zk - zc) / 2i
        const Complex sb(0.5 * (zk.imag() - zc.imag()), -0.5 * (zk.real() - zc.real()));
        const Complex ra = detail::rephase(sa, weight, phases[c0][m]);
        const Complex rb = pair ? detail::rephase(sb, weight, phases[c0 + 1][m]) : sb;
        ++m;
        z.data[k] = Complex(ra.real() - rb.imag(), ra.imag() + rb.real());
        z.data[pk] = Complex(ra.real() + rb.imag(), rb.real() - ra.imag());
      }
    }
    roadstress::detail::fft2_in_place(z, true);
    out[c0].resize(n);
    for (std::size_t i = 0; i < n; ++i) out[c0][i] = z.data[i].real();
    if (pair) {
      out[c0 + 1].resize(n);
      for (std::size_t i = 0; i < n; ++i) out[c0 + 1][i] = z.data[i].imag();
    }
  }
  return out;
}

inline void phase_scramble(FloatImage& img, double weight, Rng& rng) {
  const auto planes = phase_scramble_planes(img, weight, rng);
  for (int c = 0; c < 3; ++c) {
    auto p = img.plane(c);
    for (std::size_t i = 0; i < p.size(); ++i)
      p[i] = static_cast<float>(std::clamp(planes[c][i], 0.0, 1.0));
  }
}

// Per-channel CDF remap over 256 bins, blended with the input by `weight`.
inline void histogram_equalization(FloatImage& img, double weight) {
  const float h = static_cast<float>(weight);
  for (int c = 0; c < 3; ++c) {
    auto p = img.plane(c);
    std::array<std::size_t, 256> hist{};
    for (float v : p) ++hist[quantize_sample(v)];
    std::array<float, 256> map{};
    std::size_t cdf = 0, cdf_min = 0;
    for (int i = 0; i < 256; ++i)
      if (hist[i]) {
        cdf_min = hist[i];
        break;
      }
    const std::size_t total = p.size();
    for (int i = 0; i < 256; ++i) {
      cdf += hist[i];
      map[i] = total == cdf_min ? i / 255.0f
                                : static_cast<float>(static_cast<double>(cdf > cdf_min ? cdf - cdf_min : 0) /
                                                     static_cast<double>(total - cdf_min));
    }
    for (float& v : p) v = (1.0f - h) * v + h * map[quantize_sample(v)];
  }
}

// Gains that bring the mean colour of the brightest 5% of pixels (by luma)
// to its own grey level, blended with unit gain by `weight`.
inline void white_balance(FloatImage& img, double weight) {
  const auto y = luma(img);
  const std::size_t n = y.size();
  const std::size_t k = std::max<std::size_t>(1, n / 20);
  std::vector<float> sorted = y;
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end(), std::greater<float>());
  const float threshold = sorted[k - 1];
  std::size_t above = 0;
  for (float v : y) above += v > threshold;
  std::size_t ties_left = k - above;
  std::array<double, 3> mean{};
  for (std::size_t i = 0; i < n; ++i) {
    bool pick = y[i] > threshold;
    if (!pick && y[i] == threshold && ties_left > 0) {
      pick = true;
      --ties_left;
    }
    if (!pick) continue;
    for (int c = 0; c < 3; ++c) mean[c] += img.plane(c)[i];
  }
  const double grey = (mean[0] + mean[1] + mean[2]) / 3.0;
  for (int c = 0; c < 3; ++c) {
    const double gain = mean[c] > 0.0 ? grey / mean[c] : 1.0;
    const float blended = static_cast<float>(1.0 + weight * (gain - 1.0));
    for (float& v : img.plane(c)) v = v * blended;
  }
}

inline void greyscale(FloatImage& img, double weight) {
  const auto y = luma(img);
  const float g = static_cast<float>(weight);
  for (int c = 0; c < 3; ++c) {
    auto p = img.plane(c);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = (1.0f - g) * p[i] + g * y[i];
  }
}

inline void saturation(FloatImage& img, double factor) {
  if (factor == 1.0) return;
  scale_saturation(img, factor);
}

// Keeps the top `bits` bits of each 8-bit sample.
inline void posterize(FloatImage& img, int bits) {
  bits = std::clamp(bits, 1, 8);
  const auto mask = static_cast<std::uint8_t>(0xFF << (8 - bits));
  for (float& v : img.samples()) v = static_cast<float>(quantize_sample(v) & mask) / 255.0f;
}

}  // namespace roadstress::perturb
