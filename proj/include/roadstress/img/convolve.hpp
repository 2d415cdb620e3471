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
#include <numbers>
#include <span>
#include <vector>

#include "roadstress/core/error.hpp"
#include "roadstress/img/image.hpp"

namespace roadstress {

// Square odd-sized convolution kernel, row-major weights.
class Kernel {
 public:
  Kernel(int size, std::vector<float> weights) : size_(size), weights_(std::move(weights)) {
    require(size >= 1 && size % 2 == 1, Errc::invalid_argument,
            "kernel size must be odd and >= 1, got " + std::to_string(size));
    require(weights_.size() == static_cast<std::size_t>(size) * size, Errc::invalid_argument,
            "kernel weights must be size*size");
  }

  static Kernel identity(int size) {
    std::vector<float> w(static_cast<std::size_t>(size) * size, 0.0f);
    if (size >= 1) w[w.size() / 2] = 1.0f;
    return Kernel(size, std::move(w));
  }

  static Kernel box(int size) {
    const float v = 1.0f / static_cast<float>(size * size);
    return Kernel(size, std::vector<float>(static_cast<std::size_t>(size) * size, v));
  }

  // Normalized binary disc of the given radius. Radius < 1 gives identity.
  static Kernel disc(double radius) {
    const int r = static_cast<int>(std::floor(radius));
    if (r < 1) return identity(1);
    const int size = 2 * r + 1;
    std::vector<float> w(static_cast<std::size_t>(size) * size, 0.0f);
    int count = 0;
    for (int y = -r; y <= r; ++y)
      for (int x = -r; x <= r; ++x)
        if (x * x + y * y <= radius * radius) {
          w[(y + r) * size + (x + r)] = 1.0f;
          ++count;
        }
    for (float& v : w) v /= static_cast<float>(count);
    return Kernel(size, std::move(w));
  }

  // Normalized line of `length` unit-spaced taps through the center at
  // `angle_rad` (0 = horizontal). Length <= 1 gives identity.
  static Kernel line(double length, double angle_rad) {
    const int taps = static_cast<int>(std::lround(length));
    if (taps <= 1) return identity(1);
    const int r = (taps + 1) / 2;
    const int size = 2 * r + 1;
    std::vector<float> w(static_cast<std::size_t>(size) * size, 0.0f);
    const double ca = std::cos(angle_rad), sa = std::sin(angle_rad);
    for (int i = 0; i < taps; ++i) {
      const double t = i - (taps - 1) / 2.0;
      const int x = static_cast<int>(std::lround(t * ca));
      const int y = static_cast<int>(std::lround(-t * sa));
      w[(y + r) * size + (x + r)] += 1.0f;
    }
    for (float& v : w) v /= static_cast<float>(taps);
    return Kernel(size, std::move(w));
  }

  int size() const { return size_; }
  int radius() const { return size_ / 2; }
  float at(int x, int y) const { return weights_[y * size_ + x]; }
  std::span<const float> weights() const { return weights_; }

 private:
  int size_;
  std::vector<float> weights_;
};

// Normalized 1-D Gaussian truncated at ceil(3*sigma). sigma <= 0 gives {1}.
inline std::vector<float> gaussian_taps(double sigma) {
  if (!(sigma > 0.0)) return {1.0f};
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w(2 * r + 1);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) sum += (w[i + r] = std::exp(-(i * i) / (2.0 * sigma * sigma)));
  std::vector<float> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = static_cast<float>(w[i] / sum);
  return out;
}

inline std::vector<float> box_taps(int size) {
  return std::vector<float>(size, 1.0f / static_cast<float>(size));
}

namespace detail {

// Copies `src` (w x h) into a (w+2r) x (h+2r) buffer with clamp-to-edge.
inline std::vector<float> pad_clamped(std::span<const float> src, int w, int h, int rx, int ry) {
  const int pw = w + 2 * rx;
  std::vector<float> out(static_cast<std::size_t>(pw) * (h + 2 * ry));
  for (int y = -ry; y < h + ry; ++y) {
    const int sy = std::clamp(y, 0, h - 1);
    const float* row = src.data() + static_cast<std::size_t>(sy) * w;
    float* dst = out.data() + static_cast<std::size_t>(y + ry) * pw;
    for (int x = -rx; x < 0; ++x) dst[x + rx] = row[0];
    std::copy(row, row + w, dst + rx);
    for (int x = w; x < w + rx; ++x) dst[x + rx] = row[w - 1];
  }
  return out;
}

inline void check_kernel_fits(int size, int w, int h) {
  require(size < w && size < h, Errc::invalid_argument,
          "kernel of size " + std::to_string(size) + " does not fit a " + std::to_string(w) +
              "x" + std::to_string(h) + " image");
}

}  // namespace detail

// Single-plane 2-D convolution with clamp-to-edge borders. Zero taps are
// skipped; the accumulation order is row-major over the kernel.
inline void convolve_plane(std::span<const float> src, std::span<float> dst, int w, int h,
                           const Kernel& kernel) {
  const int r = kernel.radius();
  const int pw = w + 2 * r;
  const auto padded = detail::pad_clamped(src, w, h, r, r);
  std::fill(dst.begin(), dst.end(), 0.0f);
  for (int ky = 0; ky < kernel.size(); ++ky) {
    for (int kx = 0; kx < kernel.size(); ++kx) {
      const float wt = kernel.at(kx, ky);
      if (wt == 0.0f) continue;
      for (int y = 0; y < h; ++y) {
        const float* in = padded.data() + static_cast<std::size_t>(y + ky) * pw + kx;
        float* out = dst.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) out[x] += wt * in[x];
      }
    }
  }
}

inline FloatImage convolve2d(const FloatImage& img, const Kernel& kernel) {
  detail::check_kernel_fits(kernel.size(), img.width(), img.height());
  FloatImage out(img.width(), img.height());
  for (int c = 0; c < 3; ++c) convolve_plane(img.plane(c), out.plane(c), img.width(), img.height(), kernel);
  return out;
}

// Separable convolution: horizontal pass with `row_taps`, then vertical with
// `col_taps`. Both tap counts must be odd.
inline void convolve_separable_plane(std::span<const float> src, std::span<float> dst, int w, int h,
                                     std::span<const float> row_taps,
                                     std::span<const float> col_taps) {
  const int rx = static_cast<int>(row_taps.size()) / 2;
  const int ry = static_cast<int>(col_taps.size()) / 2;
  std::vector<float> tmp(static_cast<std::size_t>(w) * h, 0.0f);
  {
    std::vector<float> row(w + 2 * rx);
    for (int y = 0; y < h; ++y) {
      const float* in = src.data() + static_cast<std::size_t>(y) * w;
      for (int x = -rx; x < w + rx; ++x) row[x + rx] = in[std::clamp(x, 0, w - 1)];
      float* out = tmp.data() + static_cast<std::size_t>(y) * w;
      for (std::size_t k = 0; k < row_taps.size(); ++k) {
        const float wt = row_taps[k];
        for (int x = 0; x < w; ++x) out[x] += wt * row[x + k];
      }
    }
  }
  std::fill(dst.begin(), dst.end(), 0.0f);
  for (int y = 0; y < h; ++y) {
    float* out = dst.data() + static_cast<std::size_t>(y) * w;
    for (std::size_t k = 0; k < col_taps.size(); ++k) {
      const int sy = std::clamp(y + static_cast<int>(k) - ry, 0, h - 1);
      const float* in = tmp.data() + static_cast<std::size_t>(sy) * w;
      const float wt = col_taps[k];
      for (int x = 0; x < w; ++x) out[x] += wt * in[x];
    }
  }
}

inline FloatImage convolve_separable(const FloatImage& img, std::span<const float> row_taps,
                                     std::span<const float> col_taps) {
  require(row_taps.size() % 2 == 1 && col_taps.size() % 2 == 1, Errc::invalid_argument,
          "separable taps must have odd length");
  detail::check_kernel_fits(static_cast<int>(std::max(row_taps.size(), col_taps.size())),
                            img.width(), img.height());
  FloatImage out(img.width(), img.height());
  for (int c = 0; c < 3; ++c)
    convolve_separable_plane(img.plane(c), out.plane(c), img.width(), img.height(), row_taps,
                             col_taps);
  return out;
}

inline FloatImage gaussian_blur(const FloatImage& img, double sigma) {
  const auto taps = gaussian_taps(sigma);
  if (taps.size() == 1) return img;
  return convolve_separable(img, taps, taps);
}

}  // namespace roadstress
