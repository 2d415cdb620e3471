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

// Reference agent for the wire-protocol tests. Speaks on stdin/stdout, or
// connects to a harness with --connect host:port.
#include <chrono>
#include <cstdio>
#include <thread>

#include "CLI11.hpp"
#include "roadstress/proto/channel.hpp"
#include "roadstress/proto/session.hpp"

using namespace roadstress;
using namespace roadstress::proto;

int main(int argc, char** argv) {
  CLI::App app{"protocol reference agent"};
  std::string mode = "constant", connect;
  double steering = 0.0, throttle = 0.3;
  int delay_ms = 0;
  app.add_option("--mode", mode)->check(CLI::IsMember({"constant", "echo", "malformed-hello", "bad-version",
                                                        "corrupt-dims", "slow", "stale"}));
  app.add_option("--steering", steering);
  app.add_option("--throttle", throttle);
  app.add_option("--delay-ms", delay_ms);
  app.add_option("--connect", connect);
  CLI11_PARSE(app, argc, argv);

  ignore_sigpipe();
  try {
    LineChannel ch = connect.empty() ? stdio_channel() : tcp_connect(parse_endpoint(connect));
    if (mode == "malformed-hello") {
      ch.write_line("{\"type\": \"hello\", \"role\": ");
      ch.read_line(5000);
      return 0;
    }
    const bool seg = mode == "echo" || mode == "corrupt-dims";
    AgentSession session(std::move(ch), std::string(seg ? kRoleSegmentation : kRoleDriving), "proto_agent:" + mode);
    session.handshake(10000, mode == "bad-version" ? "0" : std::string(kProtocolVersion));

    std::function<Message(const FrameMsg&)> handler;
    if (mode == "echo") {
      handler = echo_segmentation_handler();
    } else if (mode == "corrupt-dims") {
      handler = [](const FrameMsg& f) -> Message {
        SegMsg s = std::get<SegMsg>(echo_segmentation_handler()(f));
        s.width += 1;
        return s;
      };
    } else if (mode == "stale") {
      handler = [](const FrameMsg& f) -> Message {
        return ActionMsg{f.episode_id, f.frame_index == 0 ? 0 : f.frame_index - 1, 0.0, 0.0};
      };
    } else {
      auto base = constant_action_handler(steering, throttle);
      handler = [=](const FrameMsg& f) -> Message {
        if (mode == "slow") std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
        return base(f);
      };
    }
    session.serve(handler);
  } catch (const Error& e) {
    std::fprintf(stderr, "proto_agent: %s: %s\n", std::string(errc_name(e.code())).c_str(), e.what());
    return 2;
  }
  return 0;
}
