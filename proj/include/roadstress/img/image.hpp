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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "roadstress/core/error.hpp"

namespace roadstress {

inline constexpr int kMinImageSide = 8;

inline void check_dimensions(int width, int height) {
  require(width >= kMinImageSide && height >= kMinImageSide, Errc::invalid_argument,
          "image must be at least 8x8, got " + std::to_string(width) + "x" +
              std::to_string(height));
}

// 8-bit RGB raster, row-major, interleaved.
class Image {
 public:
  static constexpr int channels = 3;

  Image(int width, int height) : width_(width), height_(height) {
    check_dimensions(width, height);
    data_.assign(static_cast<std::size_t>(width) * height * channels, 0);
  }

  Image(int width, int height, std::vector<std::uint8_t> data)
      : width_(width), height_(height), data_(std::move(data)) {
    check_dimensions(width, height);
    require(data_.size() == static_cast<std::size_t>(width) * height * channels,
            Errc::invalid_argument, "image data length does not match width*height*3");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  std::span<std::uint8_t> data() { return data_; }
  std::span<const std::uint8_t> data() const { return data_; }

  std::uint8_t& at(int x, int y, int c) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels + c];
  }

  void set(int x, int y, std::array<std::uint8_t, 3> rgb) {
    for (int c = 0; c < channels; ++c) at(x, y, c) = rgb[c];
  }

  bool operator==(const Image&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// Float RGB raster, nominally in [0, 1]. Stored planar (one contiguous plane
// per channel) since every kernel in the library works channel by channel.
class FloatImage {
 public:
  static constexpr int channels = 3;

  FloatImage(int width, int height, float fill = 0.0f) : width_(width), height_(height) {
    check_dimensions(width, height);
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  std::span<float> plane(int c) {
    return std::span<float>(data_).subspan(c * pixel_count(), pixel_count());
  }
  std::span<const float> plane(int c) const {
    return std::span<const float>(data_).subspan(c * pixel_count(), pixel_count());
  }

  float& at(int x, int y, int c) {
    return data_[c * pixel_count() + static_cast<std::size_t>(y) * width_ + x];
  }
  float at(int x, int y, int c) const {
    return data_[c * pixel_count() + static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<float> samples() { return data_; }
  std::span<const float> samples() const { return data_; }

  bool operator==(const FloatImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

// Round-half-up, clamped to [0, 255].
inline std::uint8_t quantize_sample(float value) {
  if (!(value > 0.0f)) return 0;  // also maps NaN to 0
  const float scaled = value * 255.0f + 0.5f;
  // truncation is floor here since scaled > 0
  return scaled >= 255.0f ? 255 : static_cast<std::uint8_t>(static_cast<int>(scaled));
}

inline FloatImage to_float(const Image& img) {
  FloatImage out(img.width(), img.height());
  const auto src = img.data();
  const std::size_t n = img.pixel_count();
  static const auto table = [] {
    std::array<float, 256> t{};
    for (int v = 0; v < 256; ++v) t[v] = static_cast<float>(v) / 255.0f;
    return t;
  }();
  for (int c = 0; c < 3; ++c) {
    auto dst = out.plane(c);
    for (std::size_t i = 0; i < n; ++i) dst[i] = table[src[i * 3 + c]];
  }
  return out;
}

inline Image quantize(const FloatImage& img) {
  Image out(img.width(), img.height());
  auto dst = out.data();
  const std::size_t n = img.pixel_count();
  for (int c = 0; c < 3; ++c) {
    const auto src = img.plane(c);
    for (std::size_t i = 0; i < n; ++i) dst[i * 3 + c] = quantize_sample(src[i]);
  }
  return out;
}

inline void clamp_unit(FloatImage& img) {
  for (float& v : img.samples()) v = std::clamp(v, 0.0f, 1.0f);
}

// BT.601 luma of a float image, one plane.
inline std::vector<float> luma(const FloatImage& img) {
  std::vector<float> y(img.pixel_count());
  const auto r = img.plane(0), g = img.plane(1), b = img.plane(2);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 0.299f * r[i] + 0.587f * g[i] + 0.114f * b[i];
  return y;
}

}  // namespace roadstress
