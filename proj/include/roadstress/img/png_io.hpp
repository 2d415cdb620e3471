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

// PNG encode/decode through libpng's simplified API.

#include <png.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "roadstress/core/error.hpp"
#include "roadstress/img/image.hpp"

namespace roadstress {

// Single-channel 8-bit raster (class-id maps, masks).
struct GreyImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;
  bool operator==(const GreyImage&) const = default;
};

namespace detail {

inline std::vector<std::uint8_t> png_encode(const std::uint8_t* pixels, int w, int h,
                                            png_uint_32 format) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = format;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels, 0, nullptr))
    fail(Errc::io_error, std::string("png encode failed: ") + image.message);
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels, 0, nullptr))
    fail(Errc::io_error, std::string("png encode failed: ") + image.message);
  out.resize(size);
  return out;
}

inline std::vector<std::uint8_t> png_decode(std::span<const std::uint8_t> bytes, png_uint_32 format,
                                            int& w, int& h) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    fail(Errc::io_error, std::string("png decode failed: ") + image.message);
  image.format = format;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    fail(Errc::io_error, std::string("png decode failed: ") + image.message);
  }
  w = static_cast<int>(image.width);
  h = static_cast<int>(image.height);
  return pixels;
}

}  // namespace detail

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), Errc::io_error, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

inline void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), Errc::io_error, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), Errc::io_error, "write failed for " + path.string());
}

inline std::vector<std::uint8_t> encode_png(const Image& img) {
  return detail::png_encode(img.data().data(), img.width(), img.height(), PNG_FORMAT_RGB);
}

inline Image decode_png(std::span<const std::uint8_t> bytes) {
  int w = 0, h = 0;
  auto pixels = detail::png_decode(bytes, PNG_FORMAT_RGB, w, h);
  return Image(w, h, std::move(pixels));
}

inline std::vector<std::uint8_t> encode_grey_png(const GreyImage& img) {
  require(img.data.size() == static_cast<std::size_t>(img.width) * img.height,
          Errc::invalid_argument, "grey raster size mismatch");
  return detail::png_encode(img.data.data(), img.width, img.height, PNG_FORMAT_GRAY);
}

inline GreyImage decode_grey_png(std::span<const std::uint8_t> bytes) {
  GreyImage out;
  out.data = detail::png_decode(bytes, PNG_FORMAT_GRAY, out.width, out.height);
  return out;
}

inline Image read_png(const std::filesystem::path& path) { return decode_png(read_file_bytes(path)); }

inline void write_png(const std::filesystem::path& path, const Image& img) {
  write_file_bytes(path, encode_png(img));
}

inline GreyImage read_grey_png(const std::filesystem::path& path) {
  return decode_grey_png(read_file_bytes(path));
}

inline void write_grey_png(const std::filesystem::path& path, const GreyImage& img) {
  write_file_bytes(path, encode_grey_png(img));
}

}  // namespace roadstress
