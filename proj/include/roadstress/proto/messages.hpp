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

// Wire messages of the agent protocol, version "1".
//
// Each message is one JSON object on one line with a "type" field:
//   hello   {role, version[, agent][, status]}
//   frame   {episode_id, frame_index, width, height, encoding, payload, sim_time_s}
//   action  {episode_id, frame_index, steering, throttle}
//   seg     {episode_id, frame_index, width, height, classes}
//   bye     {}
//   error   {code, message[, line]}
// Roles: "driving-agent", "segmentation-agent"; the harness answers a
// valid hello with {type: hello, role: harness, version: "1", status: ok}.
// Encodings: "png_base64" (PNG file bytes) and "raw_rgb_base64"
// (interleaved 8-bit RGB, row-major). Segmentation classes are one byte
// per pixel, row-major, base64.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "roadstress/core/error.hpp"
#include "roadstress/img/image.hpp"
#include "roadstress/img/png_io.hpp"
#include "roadstress/metrics/segmentation.hpp"
#include "roadstress/proto/base64.hpp"

namespace roadstress::proto {

inline constexpr std::string_view kProtocolVersion = "1";
inline constexpr std::string_view kRoleDriving = "driving-agent";
inline constexpr std::string_view kRoleSegmentation = "segmentation-agent";
inline constexpr std::string_view kRoleHarness = "harness";

enum class Encoding { png_base64, raw_rgb_base64 };

inline std::string_view encoding_name(Encoding e) {
  return e == Encoding::png_base64 ? "png_base64" : "raw_rgb_base64";
}

struct HelloMsg {
  std::string role;
  std::string version{kProtocolVersion};
  std::string agent;
  std::string status;  // "ok" in the harness reply
};

struct FrameMsg {
  std::string episode_id;
  std::uint64_t frame_index = 0;
  int width = 0, height = 0;
  Encoding encoding = Encoding::raw_rgb_base64;
  std::string payload;
  double sim_time_s = 0.0;
};

struct ActionMsg {
  std::string episode_id;
  std::uint64_t frame_index = 0;
  double steering = 0.0, throttle = 0.0;
};

struct SegMsg {
  std::string episode_id;
  std::uint64_t frame_index = 0;
  int width = 0, height = 0;
  std::string classes;
};

struct ByeMsg {};

struct ErrorMsg {
  std::string code;
  std::string message;
  std::string line;
};

using Message = std::variant<HelloMsg, FrameMsg, ActionMsg, SegMsg, ByeMsg, ErrorMsg>;

inline std::string_view message_type(const Message& m) {
  static constexpr std::string_view names[] = {"hello", "frame", "action", "seg", "bye", "error"};
  return names[m.index()];
}

inline std::string dump_line(const nlohmann::json& j) {
  return j.dump(-1, ' ', true, nlohmann::json::error_handler_t::replace);
}

inline std::string serialize(const Message& m) {
  using nlohmann::json;
  json j = {{"type", std::string(message_type(m))}};
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, HelloMsg>) {
          j["role"] = v.role;
          j["version"] = v.version;
          if (!v.agent.empty()) j["agent"] = v.agent;
          if (!v.status.empty()) j["status"] = v.status;
        } else if constexpr (std::is_same_v<T, FrameMsg>) {
          j["episode_id"] = v.episode_id;
          j["frame_index"] = v.frame_index;
          j["width"] = v.width;
          j["height"] = v.height;
          j["encoding"] = std::string(encoding_name(v.encoding));
          j["payload"] = v.payload;
          j["sim_time_s"] = v.sim_time_s;
        } else if constexpr (std::is_same_v<T, ActionMsg>) {
          j["episode_id"] = v.episode_id;
          j["frame_index"] = v.frame_index;
          j["steering"] = v.steering;
          j["throttle"] = v.throttle;
        } else if constexpr (std::is_same_v<T, SegMsg>) {
          j["episode_id"] = v.episode_id;
          j["frame_index"] = v.frame_index;
          j["width"] = v.width;
          j["height"] = v.height;
          j["classes"] = v.classes;
        } else if constexpr (std::is_same_v<T, ErrorMsg>) {
          j["code"] = v.code;
          j["message"] = v.message;
          if (!v.line.empty()) j["line"] = v.line;
        }
      },
      m);
  return dump_line(j);
}

namespace detail {

inline std::string clip_line(std::string_view line) {
  constexpr std::size_t kMax = 200;
  return line.size() <= kMax ? std::string(line) : std::string(line.substr(0, kMax)) + "...";
}

template <typename T>
T field(const nlohmann::json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw std::invalid_argument(std::string("missing field '") + name + "'");
  return it->get<T>();
}

inline int dimension(const nlohmann::json& j, const char* name) {
  const auto v = field<std::int64_t>(j, name);
  if (v < 1 || v > 16384) throw std::invalid_argument(std::string("field '") + name + "' out of range");
  return static_cast<int>(v);
}

inline double finite(const nlohmann::json& j, const char* name) {
  const double v = field<double>(j, name);
  if (!std::isfinite(v)) throw std::invalid_argument(std::string("field '") + name + "' is not finite");
  return v;
}

}  // namespace detail

// Throws protocol-error (with the offending line) on malformed input.
inline Message parse_message(std::string_view line) {
  using nlohmann::json;
  try {
    const json j = json::parse(line);
    if (!j.is_object()) throw std::invalid_argument("message is not a JSON object");
    const std::string type = detail::field<std::string>(j, "type");
    if (type == "hello") {
      HelloMsg m;
      m.role = detail::field<std::string>(j, "role");
      m.version = detail::field<std::string>(j, "version");
      if (j.contains("agent")) m.agent = j.at("agent").get<std::string>();
      if (j.contains("status")) m.status = j.at("status").get<std::string>();
      return m;
    }
    if (type == "frame") {
      FrameMsg m;
      m.episode_id = detail::field<std::string>(j, "episode_id");
      m.frame_index = detail::field<std::uint64_t>(j, "frame_index");
      m.width = detail::dimension(j, "width");
      m.height = detail::dimension(j, "height");
      const std::string enc = detail::field<std::string>(j, "encoding");
      if (enc == "png_base64") m.encoding = Encoding::png_base64;
      else if (enc == "raw_rgb_base64") m.encoding = Encoding::raw_rgb_base64;
      else throw std::invalid_argument("unknown encoding '" + enc + "'");
      m.payload = detail::field<std::string>(j, "payload");
      m.sim_time_s = detail::finite(j, "sim_time_s");
      return m;
    }
    if (type == "action") {
      ActionMsg m;
      m.episode_id = detail::field<std::string>(j, "episode_id");
      m.frame_index = detail::field<std::uint64_t>(j, "frame_index");
      m.steering = detail::finite(j, "steering");
      m.throttle = detail::finite(j, "throttle");
      return m;
    }
    if (type == "seg") {
      SegMsg m;
      m.episode_id = detail::field<std::string>(j, "episode_id");
      m.frame_index = detail::field<std::uint64_t>(j, "frame_index");
      m.width = detail::dimension(j, "width");
      m.height = detail::dimension(j, "height");
      m.classes = detail::field<std::string>(j, "classes");
      return m;
    }
    if (type == "bye") return ByeMsg{};
    if (type == "error") {
      ErrorMsg m;
      m.code = detail::field<std::string>(j, "code");
      m.message = detail::field<std::string>(j, "message");
      if (j.contains("line")) m.line = j.at("line").get<std::string>();
      return m;
    }
    throw std::invalid_argument("unknown message type '" + type + "'");
  } catch (const json::exception& e) {
    fail(Errc::protocol_error, std::string("malformed message: ") + e.what() + " in line: " + detail::clip_line(line));
  } catch (const std::invalid_argument& e) {
    fail(Errc::protocol_error, std::string("malformed message: ") + e.what() + " in line: " + detail::clip_line(line));
  }
}

// ---- payload helpers ----

inline FrameMsg make_frame(const std::string& episode_id, std::uint64_t index, const Image& img, double sim_time_s,
                           Encoding enc = Encoding::raw_rgb_base64) {
  FrameMsg m{episode_id, index, img.width(), img.height(), enc, {}, sim_time_s};
  if (enc == Encoding::png_base64) {
    const auto png = encode_png(img);
    m.payload = base64_encode(png);
  } else {
    m.payload = base64_encode(img.data());
  }
  return m;
}

inline Image decode_frame(const FrameMsg& m) {
  require(m.width >= kMinImageSide && m.height >= kMinImageSide, Errc::protocol_error,
          "frame is smaller than the minimum raster");
  const std::vector<std::uint8_t> bytes = base64_decode(m.payload);
  Image img = [&] {
    if (m.encoding == Encoding::png_base64) {
      try {
        return decode_png(bytes);
      } catch (const Error& e) {
        fail(Errc::protocol_error, std::string("frame payload is not a PNG: ") + e.what());
      }
    }
    require(bytes.size() == static_cast<std::size_t>(m.width) * m.height * 3, Errc::protocol_error,
            "raw frame payload size does not match width x height x 3");
    return Image(m.width, m.height, bytes);
  }();
  require(img.width() == m.width && img.height() == m.height, Errc::protocol_error,
          "decoded frame dimensions differ from the declared width/height");
  return img;
}

inline SegMsg make_seg(const std::string& episode_id, std::uint64_t index, const SegMap& map) {
  return {episode_id, index, map.width, map.height, base64_encode(map.classes)};
}

inline SegMap decode_seg(const SegMsg& m) {
  std::vector<std::uint8_t> bytes = base64_decode(m.classes);
  require(bytes.size() == static_cast<std::size_t>(m.width) * m.height, Errc::protocol_error,
          "segmentation payload size does not match width x height");
  return SegMap(m.width, m.height, std::move(bytes));
}

}  // namespace roadstress::proto
