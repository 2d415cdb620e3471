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

// Newline-delimited byte channels over POSIX descriptors: socket pairs,
// TCP, child-process pipes and the standard streams.

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roadstress/core/error.hpp"

namespace roadstress::proto {

inline constexpr std::size_t kMaxLineBytes = std::size_t{64} << 20;

inline void ignore_sigpipe() {
  static const bool done = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

inline std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

class LineChannel {
 public:
  LineChannel() = default;
  LineChannel(int read_fd, int write_fd, bool owns = true) : rfd_(read_fd), wfd_(write_fd), owns_(owns) {
    ignore_sigpipe();
  }
  LineChannel(const LineChannel&) = delete;
  LineChannel& operator=(const LineChannel&) = delete;
  LineChannel(LineChannel&& o) noexcept { *this = std::move(o); }
  LineChannel& operator=(LineChannel&& o) noexcept {
    if (this != &o) {
      close();
      rfd_ = std::exchange(o.rfd_, -1);
      wfd_ = std::exchange(o.wfd_, -1);
      owns_ = o.owns_;
      buf_ = std::move(o.buf_);
    }
    return *this;
  }
  ~LineChannel() { close(); }

  bool is_open() const { return rfd_ >= 0 || wfd_ >= 0; }

  void close() {
    if (owns_) {
      if (rfd_ >= 0) ::close(rfd_);
      if (wfd_ >= 0 && wfd_ != rfd_) ::close(wfd_);
    }
    rfd_ = wfd_ = -1;
  }

  // Half-closes the write side so the peer sees end of stream.
  void shutdown_write() {
    if (wfd_ < 0) return;
    if (wfd_ == rfd_) {
      ::shutdown(wfd_, SHUT_WR);
    } else {
      if (owns_) ::close(wfd_);
      wfd_ = -1;
    }
  }

  // Next line without its terminator. nullopt when `timeout_ms` elapses
  // first (negative waits forever). End of stream raises disconnect.
  std::optional<std::string> read_line(int timeout_ms = -1) {
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::milliseconds(timeout_ms < 0 ? 0 : timeout_ms);
    for (;;) {
      if (const auto nl = buf_.find('\n'); nl != std::string::npos) {
        std::string line = buf_.substr(0, nl);
        buf_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      require(buf_.size() <= kMaxLineBytes, Errc::protocol_error, "line exceeds the maximum length");
      require(rfd_ >= 0, Errc::disconnect, "channel is closed");
      int wait = -1;
      if (timeout_ms >= 0) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
        if (left <= 0) return std::nullopt;
        wait = static_cast<int>(left);
      }
      pollfd p{rfd_, POLLIN, 0};
      const int r = ::poll(&p, 1, wait);
      if (r < 0) {
        if (errno == EINTR) continue;
        fail(Errc::disconnect, errno_text("poll"));
      }
      if (r == 0) return std::nullopt;
      char chunk[65536];
      const ssize_t n = ::read(rfd_, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        fail(Errc::disconnect, errno_text("read"));
      }
      if (n == 0) fail(Errc::disconnect, "peer closed the connection");
      buf_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  void write_line(std::string_view line) {
    require(wfd_ >= 0, Errc::disconnect, "channel is closed");
    std::string data(line);
    data += '\n';
    std::size_t off = 0;
    while (off < data.size()) {
      const ssize_t n = ::write(wfd_, data.data() + off, data.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        fail(Errc::disconnect, errno_text("write"));
      }
      off += static_cast<std::size_t>(n);
    }
  }

 private:
  int rfd_ = -1, wfd_ = -1;
  bool owns_ = true;
  std::string buf_;
};

// Connected in-process pair.
inline std::pair<LineChannel, LineChannel> channel_pair() {
  int sv[2];
  require(::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) == 0, Errc::io_error, errno_text("socketpair"));
  return {LineChannel(sv[0], sv[0]), LineChannel(sv[1], sv[1])};
}

inline LineChannel stdio_channel() { return LineChannel(STDIN_FILENO, STDOUT_FILENO, false); }

struct Endpoint {
  std::string host = "127.0.0.1";
  int port = 0;
};

// "host:port" or ":port".
inline Endpoint parse_endpoint(std::string_view text) {
  const auto colon = text.rfind(':');
  require(colon != std::string_view::npos, Errc::invalid_argument, "endpoint must be host:port");
  Endpoint e;
  if (colon > 0) e.host = std::string(text.substr(0, colon));
  try {
    std::size_t used = 0;
    const std::string port(text.substr(colon + 1));
    e.port = std::stoi(port, &used);
    require(used == port.size(), Errc::invalid_argument, "bad port");
  } catch (const std::logic_error&) {
    fail(Errc::invalid_argument, "bad port in endpoint '" + std::string(text) + "'");
  }
  require(e.port >= 0 && e.port <= 65535, Errc::invalid_argument, "port out of range");
  return e;
}

inline sockaddr_in resolve(const Endpoint& e) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(e.port));
  if (::inet_pton(AF_INET, e.host.c_str(), &addr.sin_addr) == 1) return addr;
  addrinfo hints{}, *res = nullptr;
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  require(::getaddrinfo(e.host.c_str(), nullptr, &hints, &res) == 0 && res, Errc::io_error,
          "cannot resolve host '" + e.host + "'");
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  ::freeaddrinfo(res);
  return addr;
}

class TcpListener {
 public:
  explicit TcpListener(const Endpoint& e) {
    fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
    require(fd_ >= 0, Errc::io_error, errno_text("socket"));
    const int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    const sockaddr_in addr = resolve(e);
    if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0 || ::listen(fd_, 8) != 0) {
      const std::string msg = errno_text("bind/listen");
      ::close(fd_);
      fail(Errc::io_error, msg);
    }
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
  }
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;
  ~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
  }

  int port() const { return port_; }

  LineChannel accept(int timeout_ms = -1) {
    pollfd p{fd_, POLLIN, 0};
    int r;
    do r = ::poll(&p, 1, timeout_ms);
    while (r < 0 && errno == EINTR);
    require(r > 0, Errc::timeout, "no agent connected before the deadline");
    const int c = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
    require(c >= 0, Errc::io_error, errno_text("accept"));
    const int one = 1;
    ::setsockopt(c, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return LineChannel(c, c);
  }

 private:
  int fd_ = -1;
  int port_ = 0;
};

inline LineChannel tcp_connect(const Endpoint& e, int timeout_ms = 5000) {
  const sockaddr_in addr = resolve(e);
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  for (;;) {
    const int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
    require(fd >= 0, Errc::io_error, errno_text("socket"));
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) == 0) {
      const int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      return LineChannel(fd, fd);
    }
    const std::string msg = errno_text("connect");
    ::close(fd);
    if (std::chrono::steady_clock::now() >= deadline) fail(Errc::disconnect, msg);
    ::usleep(20000);
  }
}

// Child process speaking the protocol on its stdin/stdout.
class Subprocess {
 public:
  explicit Subprocess(const std::vector<std::string>& argv) {
    require(!argv.empty(), Errc::invalid_argument, "empty command");
    int to_child[2], from_child[2];
    require(::pipe2(to_child, O_CLOEXEC) == 0 && ::pipe2(from_child, O_CLOEXEC) == 0, Errc::io_error,
            errno_text("pipe"));
    std::vector<char*> args;
    for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    pid_ = ::fork();
    require(pid_ >= 0, Errc::io_error, errno_text("fork"));
    if (pid_ == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::execvp(args[0], args.data());
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    channel_ = LineChannel(from_child[0], to_child[1]);
  }
  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;
  ~Subprocess() {
    channel_.close();
    if (pid_ > 0) {
      ::kill(pid_, SIGTERM);
      wait();
    }
  }

  LineChannel& channel() { return channel_; }

  int wait() {
    if (pid_ <= 0) return status_;
    int st = 0;
    while (::waitpid(pid_, &st, 0) < 0 && errno == EINTR) {
    }
    pid_ = -1;
    status_ = WIFEXITED(st) ? WEXITSTATUS(st) : 128 + WTERMSIG(st);
    return status_;
  }

 private:
  pid_t pid_ = -1;
  int status_ = 0;
  LineChannel channel_;
};

}  // namespace roadstress::proto
