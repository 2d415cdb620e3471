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

#include <stdexcept>
#include <string>
#include <string_view>

namespace roadstress {

enum class Errc {
  invalid_argument,
  not_found,
  unsupported_perturbation,
  undefined_metric,
  generation_failed,
  handshake_error,
  protocol_error,
  timeout,
  disconnect,
  invalid_dataset,
  io_error,
  agent_error,
};

inline constexpr std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::not_found: return "not-found";
    case Errc::unsupported_perturbation: return "unsupported-perturbation";
    case Errc::undefined_metric: return "undefined-metric";
    case Errc::generation_failed: return "generation-failed";
    case Errc::handshake_error: return "handshake-error";
    case Errc::protocol_error: return "protocol-error";
    case Errc::timeout: return "timeout";
    case Errc::disconnect: return "disconnect";
    case Errc::invalid_dataset: return "invalid-dataset";
    case Errc::io_error: return "io-error";
    case Errc::agent_error: return "agent-error";
  }
  return "unknown";
}

// Every failure surfaced by the library is an Error carrying one code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, Errc code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace roadstress
