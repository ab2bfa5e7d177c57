// Copyright 2026 The Authors.
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

#include <chrono>
#include <cstddef>
#include <deque>
#include <functional>
#include <string>

namespace vsa {

/// Line-delimited TCP mirror for alerts. Never blocks the caller: the socket
/// is non-blocking, unsent lines are buffered (oldest dropped past
/// `max_buffered`), and failed connections are retried after `retry_interval`.
/// Problems are reported through `log` (stderr by default).
class TcpAlertSink {
 public:
  using Logger = std::function<void(const std::string&)>;

  /// `endpoint` is "host:port" (IPv4 host or name). Throws ConfigError on a
  /// malformed endpoint.
  explicit TcpAlertSink(const std::string& endpoint, std::size_t max_buffered = 10000,
                        std::chrono::milliseconds retry_interval = std::chrono::milliseconds(1000),
                        Logger log = {});
  ~TcpAlertSink();
  TcpAlertSink(const TcpAlertSink&) = delete;
  TcpAlertSink& operator=(const TcpAlertSink&) = delete;

  /// Queues one line (newline appended) and tries to send.
  void publish(const std::string& line);
  /// Sends as much buffered data as the socket accepts right now.
  void flush();
  /// Flushes, waiting up to `timeout` for the socket to drain.
  void drain(std::chrono::milliseconds timeout);

  std::size_t buffered() const { return queue_.size(); }
  std::size_t dropped() const { return dropped_; }
  bool connected() const { return fd_ >= 0 && connected_; }

 private:
  void try_connect();
  void close_socket();

  std::string host_;
  std::string port_;
  std::size_t max_buffered_;
  std::chrono::milliseconds retry_interval_;
  Logger log_;
  int fd_ = -1;
  bool connected_ = false;
  std::chrono::steady_clock::time_point next_attempt_{};
  std::deque<std::string> queue_;
  std::size_t front_offset_ = 0;
  std::size_t dropped_ = 0;
};

}  // namespace vsa
