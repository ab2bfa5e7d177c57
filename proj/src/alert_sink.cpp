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

#include "vsa/alert_sink.hpp"

#include <cerrno>
#include <cstring>
#include <iostream>
#include <thread>

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "vsa/error.hpp"

namespace vsa {

TcpAlertSink::TcpAlertSink(const std::string& endpoint, std::size_t max_buffered,
                           std::chrono::milliseconds retry_interval, Logger log)
    : max_buffered_(max_buffered), retry_interval_(retry_interval), log_(std::move(log)) {
  const auto colon = endpoint.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == endpoint.size())
    throw ConfigError("alert sink must be host:port, got '" + endpoint + "'");
  host_ = endpoint.substr(0, colon);
  port_ = endpoint.substr(colon + 1);
  if (port_.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("alert sink port is not numeric: '" + port_ + "'");
  if (!log_) log_ = [](const std::string& msg) { std::cerr << "alert sink: " << msg << '\n'; };
}

TcpAlertSink::~TcpAlertSink() { close_socket(); }

void TcpAlertSink::close_socket() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
  connected_ = false;
}

void TcpAlertSink::try_connect() {
  const auto now = std::chrono::steady_clock::now();
  if (now < next_attempt_) return;
  next_attempt_ = now + retry_interval_;

  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (const int rc = ::getaddrinfo(host_.c_str(), port_.c_str(), &hints, &res); rc != 0) {
    log_("cannot resolve " + host_ + ": " + ::gai_strerror(rc));
    return;
  }
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_NONBLOCK | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0 || errno == EINPROGRESS) {
      fd_ = fd;
      connected_ = false;
      break;
    }
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) log_("cannot connect to " + host_ + ":" + port_ + ": " + std::strerror(errno));
}

void TcpAlertSink::publish(const std::string& line) {
  queue_.push_back(line + "\n");
  while (queue_.size() > max_buffered_) {
    // Keep a partially written line so the stream stays line-aligned.
    if (front_offset_ > 0 && queue_.size() > 1) {
      queue_.erase(queue_.begin() + 1);
    } else {
      queue_.pop_front();
      front_offset_ = 0;
    }
    ++dropped_;
  }
  flush();
}

void TcpAlertSink::flush() {
  if (queue_.empty()) return;
  if (fd_ < 0) try_connect();
  if (fd_ < 0) return;

  if (!connected_) {
    pollfd p{fd_, POLLOUT, 0};
    if (::poll(&p, 1, 0) <= 0) return;  // still connecting
    int err = 0;
    socklen_t len = sizeof(err);
    ::getsockopt(fd_, SOL_SOCKET, SO_ERROR, &err, &len);
    if (err != 0) {
      log_("connection to " + host_ + ":" + port_ + " failed: " + std::strerror(err));
      close_socket();
      return;
    }
    connected_ = true;
  }

  while (!queue_.empty()) {
    const std::string& front = queue_.front();
    const char* data = front.data() + front_offset_;
    const std::size_t left = front.size() - front_offset_;
    const ssize_t n = ::send(fd_, data, left, MSG_NOSIGNAL | MSG_DONTWAIT);
    if (n < 0) {
      if (errno == EAGAIN || errno == EWOULDBLOCK) return;
      log_(std::string("send failed: ") + std::strerror(errno));
      close_socket();
      front_offset_ = 0;  // resend the whole line on reconnect
      return;
    }
    front_offset_ += static_cast<std::size_t>(n);
    if (front_offset_ == front.size()) {
      queue_.pop_front();
      front_offset_ = 0;
    }
  }
}

void TcpAlertSink::drain(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (!queue_.empty() && std::chrono::steady_clock::now() < deadline) {
    flush();
    if (queue_.empty()) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
}

}  // namespace vsa
