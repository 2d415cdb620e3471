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

// Protocol sessions. The harness side answers the agent's hello and then
// drives strict request/reply alternation; the agent side is a serve loop.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "roadstress/core/error.hpp"
#include "roadstress/proto/channel.hpp"
#include "roadstress/proto/messages.hpp"
#include "roadstress/sim/episode.hpp"

namespace roadstress::proto {

class HarnessSession {
 public:
  explicit HarnessSession(LineChannel ch) : ch_(std::move(ch)) {}

  // Waits for the agent's hello. Bad JSON, a bad role or a version
  // mismatch are answered with an error message and raise handshake-error.
  HelloMsg handshake(int timeout_ms = 10000, std::string_view expected_role = {}) {
    const auto line = ch_.read_line(timeout_ms);
    require(line.has_value(), Errc::handshake_error, "no hello before the deadline");
    Message m;
    try {
      m = parse_message(*line);
    } catch (const Error& e) {
      reject("handshake-error", e.what(), *line);
    }
    auto* hello = std::get_if<HelloMsg>(&m);
    if (!hello) reject("handshake-error", "expected hello, got " + std::string(message_type(m)), *line);
    if (hello->version != kProtocolVersion)
      reject("handshake-error", "unsupported protocol version '" + hello->version + "'", *line);
    if (hello->role != kRoleDriving && hello->role != kRoleSegmentation)
      reject("handshake-error", "unknown role '" + hello->role + "'", *line);
    if (!expected_role.empty() && hello->role != expected_role)
      reject("handshake-error", "expected role " + std::string(expected_role) + ", got " + hello->role, *line);
    role_ = hello->role;
    agent_ = hello->agent;
    send(HelloMsg{std::string(kRoleHarness), std::string(kProtocolVersion), {}, "ok"});
    return *hello;
  }

  const std::string& role() const { return role_; }
  const std::string& agent_name() const { return agent_; }
  const std::vector<ActionMsg>& action_log() const { return actions_; }

  // nullopt on deadline. Replies to frames that timed out earlier are
  // dropped when they arrive late.
  std::optional<ActionMsg> request_action(const FrameMsg& frame, int deadline_ms) {
    require(role_ == kRoleDriving, Errc::protocol_error, "session is not a driving-agent session");
    auto reply = exchange(frame, deadline_ms);
    if (!reply) return std::nullopt;
    auto* a = std::get_if<ActionMsg>(&*reply);
    if (!a) protocol_failure("expected action, got " + std::string(message_type(*reply)));
    actions_.push_back(*a);
    return *a;
  }

  std::optional<SegMsg> request_segmentation(const FrameMsg& frame, int deadline_ms) {
    require(role_ == kRoleSegmentation, Errc::protocol_error, "session is not a segmentation-agent session");
    auto reply = exchange(frame, deadline_ms);
    if (!reply) return std::nullopt;
    auto* s = std::get_if<SegMsg>(&*reply);
    if (!s) protocol_failure("expected seg, got " + std::string(message_type(*reply)));
    if (s->width != frame.width || s->height != frame.height)
      protocol_failure("segmentation reply is " + std::to_string(s->width) + "x" + std::to_string(s->height) +
                       ", frame is " + std::to_string(frame.width) + "x" + std::to_string(frame.height));
    return *s;
  }

  void bye() {
    try {
      send(ByeMsg{});
    } catch (const Error&) {
    }
  }

  void send(const Message& m) { ch_.write_line(serialize(m)); }

 private:
  [[noreturn]] void reject(const std::string& code, const std::string& msg, const std::string& line) {
    try {
      send(ErrorMsg{code, msg, detail::clip_line(line)});
    } catch (const Error&) {
    }
    fail(Errc::handshake_error, msg);
  }

  [[noreturn]] void protocol_failure(const std::string& msg, const std::string& line = {}) {
    try {
      send(ErrorMsg{"protocol-error", msg, detail::clip_line(line)});
    } catch (const Error&) {
    }
    fail(Errc::protocol_error, msg);
  }

  std::optional<Message> exchange(const FrameMsg& frame, int deadline_ms) {
    send(frame);
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::milliseconds(std::max(0, deadline_ms));
    for (;;) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
      const auto line = ch_.read_line(deadline_ms < 0 ? -1 : static_cast<int>(std::max<long long>(0, left)));
      if (!line) {
        timed_out_.insert({frame.episode_id, frame.frame_index});
        return std::nullopt;
      }
      Message m;
      try {
        m = parse_message(*line);
      } catch (const Error& e) {
        protocol_failure(e.what(), *line);
      }
      if (auto* err = std::get_if<ErrorMsg>(&m)) fail(Errc::agent_error, "agent error " + err->code + ": " + err->message);
      if (std::holds_alternative<ByeMsg>(m)) fail(Errc::disconnect, "agent said bye");
      std::string episode;
      std::uint64_t index = 0;
      if (auto* a = std::get_if<ActionMsg>(&m)) episode = a->episode_id, index = a->frame_index;
      else if (auto* s = std::get_if<SegMsg>(&m)) episode = s->episode_id, index = s->frame_index;
      else protocol_failure("unexpected " + std::string(message_type(m)) + " message", *line);
      if (episode == frame.episode_id && index == frame.frame_index) return m;
      if (timed_out_.count({episode, index})) continue;  // late reply
      protocol_failure("reply for frame " + episode + "/" + std::to_string(index) + " while waiting for " +
                           frame.episode_id + "/" + std::to_string(frame.frame_index),
                       *line);
    }
  }

  LineChannel ch_;
  std::string role_, agent_;
  std::vector<ActionMsg> actions_;
  std::set<std::pair<std::string, std::uint64_t>> timed_out_;
};

// Agent side: sends hello, checks the ack, then answers frames.
class AgentSession {
 public:
  AgentSession(LineChannel ch, std::string role, std::string agent_name)
      : ch_(std::move(ch)), role_(std::move(role)), name_(std::move(agent_name)) {}

  void handshake(int timeout_ms = 10000, std::string version = std::string(kProtocolVersion)) {
    ch_.write_line(serialize(HelloMsg{role_, std::move(version), name_, {}}));
    const auto line = ch_.read_line(timeout_ms);
    require(line.has_value(), Errc::handshake_error, "no hello reply before the deadline");
    const Message m = parse_message(*line);
    if (auto* err = std::get_if<ErrorMsg>(&m)) fail(Errc::handshake_error, err->message);
    auto* hello = std::get_if<HelloMsg>(&m);
    require(hello && hello->status == "ok", Errc::handshake_error, "handshake was not acknowledged");
  }

  // Handler gets each frame and returns the reply. Returns the number of
  // frames answered when the harness says bye or closes the stream.
  std::size_t serve(const std::function<Message(const FrameMsg&)>& handler) {
    std::size_t answered = 0;
    for (;;) {
      std::optional<std::string> line;
      try {
        line = ch_.read_line(-1);
      } catch (const Error& e) {
        if (e.code() == Errc::disconnect) return answered;
        throw;
      }
      const Message m = parse_message(*line);
      if (std::holds_alternative<ByeMsg>(m)) return answered;
      if (auto* err = std::get_if<ErrorMsg>(&m)) fail(Errc::protocol_error, "harness error: " + err->message);
      auto* frame = std::get_if<FrameMsg>(&m);
      if (!frame) continue;
      ch_.write_line(serialize(handler(*frame)));
      ++answered;
    }
  }

  LineChannel& channel() { return ch_; }

 private:
  LineChannel ch_;
  std::string role_, name_;
};

// ---- reference agent behaviors ----

inline std::function<Message(const FrameMsg&)> constant_action_handler(double steering, double throttle) {
  return [=](const FrameMsg& f) -> Message { return ActionMsg{f.episode_id, f.frame_index, steering, throttle}; };
}

// Test-mode frames carry the class map in the red channel.
inline SegMap embedded_class_map(const Image& img) {
  SegMap map(img.width(), img.height());
  const auto d = img.data();
  for (std::size_t i = 0; i < map.classes.size(); ++i) map.classes[i] = d[3 * i];
  return map;
}

inline std::function<Message(const FrameMsg&)> echo_segmentation_handler() {
  return [](const FrameMsg& f) -> Message { return make_seg(f.episode_id, f.frame_index, embedded_class_map(decode_frame(f))); };
}

// ---- harness-side adapters ----

struct RemotePolicy {
  int deadline_ms = 1000;
  Encoding encoding = Encoding::raw_rgb_base64;
};

// Drives through a remote agent. On a missed deadline the previous action
// is repeated once; a second consecutive miss aborts with timeout.
class RemoteDrivingAgent : public DrivingAgent {
 public:
  RemoteDrivingAgent(HarnessSession& session, RemotePolicy policy = {}) : s_(session), policy_(policy) {}
  std::string name() const override {
    return "remote:" + (s_.agent_name().empty() ? std::string("agent") : s_.agent_name());
  }
  void begin_episode(const std::string&) override {
    last_ = {};
    misses_ = 0;
  }
  Action act(const Observation& obs) override {
    require(obs.image != nullptr, Errc::agent_error, "remote agent needs a frame");
    const FrameMsg frame = make_frame(obs.episode_id, obs.frame_index, *obs.image, obs.sim_time_s, policy_.encoding);
    const auto reply = s_.request_action(frame, policy_.deadline_ms);
    if (!reply) {
      require(++misses_ < 2, Errc::timeout, "agent missed two consecutive deadlines");
      return last_;
    }
    misses_ = 0;
    last_ = Action{reply->steering, reply->throttle}.clamped();
    return last_;
  }

 private:
  HarnessSession& s_;
  RemotePolicy policy_;
  Action last_;
  int misses_ = 0;
};

}  // namespace roadstress::proto
