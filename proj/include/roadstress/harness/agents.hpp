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

// Agent specs from the suite config, for both tasks:
//   builtin:centroid  builtin:expert  builtin:constant[:<steer>,<throttle>]   driving
//   builtin:echo      builtin:gt                                              segmentation
//   tcp:<host>:<port>   the harness listens and the agent connects
//   exec:<command line> the agent runs as a child on stdin/stdout

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "roadstress/core/error.hpp"
#include "roadstress/expert/expert.hpp"
#include "roadstress/metrics/segmentation.hpp"
#include "roadstress/proto/channel.hpp"
#include "roadstress/proto/session.hpp"
#include "roadstress/sim/centroid.hpp"
#include "roadstress/sim/episode.hpp"

namespace roadstress {

inline bool is_remote_agent(const std::string& spec) { return spec.rfind("tcp:", 0) == 0 || spec.rfind("exec:", 0) == 0; }

// Whitespace split with single and double quotes.
inline std::vector<std::string> split_command_line(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  bool any = false;
  char quote = 0;
  for (char c : s) {
    if (quote) {
      if (c == quote) quote = 0;
      else cur += c;
    } else if (c == '\'' || c == '"') {
      quote = c;
      any = true;
    } else if (c == ' ' || c == '\t') {
      if (any || !cur.empty()) out.push_back(cur);
      cur.clear();
      any = false;
    } else {
      cur += c;
    }
  }
  require(quote == 0, Errc::invalid_argument, "unterminated quote in command line");
  if (any || !cur.empty()) out.push_back(cur);
  require(!out.empty(), Errc::invalid_argument, "empty agent command line");
  return out;
}

// One live protocol session to an external agent.
class RemoteConnection {
 public:
  RemoteConnection(const std::string& spec, std::string_view role, int handshake_timeout_ms = 10000) {
    proto::ignore_sigpipe();
    if (spec.rfind("exec:", 0) == 0) {
      proc_ = std::make_unique<proto::Subprocess>(split_command_line(spec.substr(5)));
      session_ = std::make_unique<proto::HarnessSession>(std::move(proc_->channel()));
    } else if (spec.rfind("tcp:", 0) == 0) {
      proto::TcpListener listener(proto::parse_endpoint(spec.substr(4)));
      session_ = std::make_unique<proto::HarnessSession>(listener.accept(handshake_timeout_ms));
    } else {
      fail(Errc::invalid_argument, "not a remote agent spec: " + spec);
    }
    session_->handshake(handshake_timeout_ms, role);
  }
  RemoteConnection(const RemoteConnection&) = delete;
  RemoteConnection& operator=(const RemoteConnection&) = delete;
  ~RemoteConnection() {
    try {
      session_->bye();
    } catch (const Error&) {
    }
    session_.reset();
    if (proc_) proc_->wait();
  }

  proto::HarnessSession& session() { return *session_; }

 private:
  std::unique_ptr<proto::Subprocess> proc_;
  std::unique_ptr<proto::HarnessSession> session_;
};

// ---- driving ----

struct DrivingAgentSource {
  std::string spec;
  std::unique_ptr<RemoteConnection> remote;  // set for tcp: and exec:
  proto::RemotePolicy policy;

  // Builtin agents are stateless across episodes and may run in parallel.
  bool parallel_safe() const { return remote == nullptr; }

  std::unique_ptr<DrivingAgent> make() const {
    if (remote) return std::make_unique<proto::RemoteDrivingAgent>(remote->session(), policy);
    if (spec == "builtin:centroid") return std::make_unique<CentroidAgent>();
    if (spec == "builtin:expert") return std::make_unique<ExpertAgent>();
    if (spec.rfind("builtin:constant", 0) == 0) {
      Action a{0.0, 0.5};
      if (spec.size() > 16) {
        require(spec[16] == ':', Errc::invalid_argument, "bad agent spec " + spec);
        const std::string args = spec.substr(17);
        const auto comma = args.find(',');
        require(comma != std::string::npos, Errc::invalid_argument, "builtin:constant takes <steer>,<throttle>");
        a = {std::stod(args.substr(0, comma)), std::stod(args.substr(comma + 1))};
      }
      return std::make_unique<ConstantAgent>(a);
    }
    fail(Errc::invalid_argument, "unknown driving agent '" + spec + "'");
  }
};

inline DrivingAgentSource open_driving_agent(const std::string& spec, proto::RemotePolicy policy = {}) {
  DrivingAgentSource src{spec, nullptr, policy};
  if (is_remote_agent(spec)) src.remote = std::make_unique<RemoteConnection>(spec, proto::kRoleDriving);
  else src.make();  // validates the name early
  return src;
}

// ---- segmentation ----

class SegmentationAgent {
 public:
  virtual ~SegmentationAgent() = default;
  virtual std::string name() const = 0;
  // The echo agent reads its answer from class ids written into the red
  // channel, so the harness embeds labels before dispatch.
  virtual bool wants_embedded_labels() const { return false; }
  // `truth` is only consulted by the oracle agent.
  virtual SegMap segment(const Image& img, const SegMap& truth, const std::string& image_id,
                         std::uint64_t request_index) = 0;
};

class EchoSegmentationAgent : public SegmentationAgent {
 public:
  std::string name() const override { return "echo"; }
  bool wants_embedded_labels() const override { return true; }
  SegMap segment(const Image& img, const SegMap&, const std::string&, std::uint64_t) override {
    return proto::embedded_class_map(img);
  }
};

class GroundTruthSegmentationAgent : public SegmentationAgent {
 public:
  std::string name() const override { return "gt"; }
  SegMap segment(const Image&, const SegMap& truth, const std::string&, std::uint64_t) override { return truth; }
};

class RemoteSegmentationAgent : public SegmentationAgent {
 public:
  RemoteSegmentationAgent(std::unique_ptr<RemoteConnection> conn, proto::RemotePolicy policy, bool embed)
      : conn_(std::move(conn)), policy_(policy), embed_(embed) {}
  std::string name() const override {
    const std::string& n = conn_->session().agent_name();
    return "remote:" + (n.empty() ? std::string("agent") : n);
  }
  bool wants_embedded_labels() const override { return embed_; }
  SegMap segment(const Image& img, const SegMap&, const std::string& image_id, std::uint64_t request_index) override {
    const auto frame = proto::make_frame(image_id, request_index, img, 0.0, policy_.encoding);
    const auto reply = conn_->session().request_segmentation(frame, policy_.deadline_ms);
    require(reply.has_value(), Errc::timeout, "no segmentation before the deadline");
    return proto::decode_seg(*reply);
  }

 private:
  std::unique_ptr<RemoteConnection> conn_;
  proto::RemotePolicy policy_;
  bool embed_;
};

inline std::unique_ptr<SegmentationAgent> open_segmentation_agent(const std::string& spec,
                                                                  proto::RemotePolicy policy = {},
                                                                  bool embed_labels = false) {
  if (spec == "builtin:echo") return std::make_unique<EchoSegmentationAgent>();
  if (spec == "builtin:gt") return std::make_unique<GroundTruthSegmentationAgent>();
  if (is_remote_agent(spec))
    return std::make_unique<RemoteSegmentationAgent>(
        std::make_unique<RemoteConnection>(spec, proto::kRoleSegmentation), policy, embed_labels);
  fail(Errc::invalid_argument, "unknown segmentation agent '" + spec + "'");
}

inline proto::Encoding parse_encoding(const std::string& s) {
  if (s == "raw_rgb_base64") return proto::Encoding::raw_rgb_base64;
  if (s == "png_base64") return proto::Encoding::png_base64;
  fail(Errc::invalid_argument, "unknown encoding '" + s + "'");
}

}  // namespace roadstress
