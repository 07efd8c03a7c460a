// Copyright 2026 The xssguard Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP/1.1 forward proxy front end. One thread per client connection, so a
// request held for an operator decision only blocks its own connection.
// CONNECT is tunnelled opaquely.

#ifndef XSSGUARD_PROXY_SERVER_H_
#define XSSGUARD_PROXY_SERVER_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "xssguard/gateway.h"

namespace xssguard {

// Sends requests for `host_suffix` (and its subdomains) to a fixed address
// instead of resolving the name. Used for local test fixtures.
struct UpstreamOverride {
  std::string host_suffix;
  std::string address = "127.0.0.1";
  uint16_t port = 80;
};

struct ProxyOptions {
  std::string host = "127.0.0.1";
  uint16_t port = 8118;  // 0 picks a free port
  std::vector<UpstreamOverride> upstream_overrides;
  std::chrono::seconds upstream_timeout{30};
  size_t max_request_body_bytes = 64 * 1024 * 1024;
  size_t max_response_body_bytes = 256 * 1024 * 1024;
};

// Splits "host:port" (IPv6 in brackets). Port defaults to `default_port`.
std::optional<std::pair<std::string, uint16_t>> ParseHostPort(
    std::string_view text, uint16_t default_port);

// Keeps only the codings the response rewriter can undo. Returns nullopt
// when nothing acceptable remains.
std::optional<std::string> FilterAcceptEncoding(std::string_view value);

class ProxyServer {
 public:
  ProxyServer(Gateway& gateway, ProxyOptions options);
  ~ProxyServer();

  ProxyServer(const ProxyServer&) = delete;
  ProxyServer& operator=(const ProxyServer&) = delete;

  // Binds and starts accepting. Returns false if the address is unusable.
  bool Start();
  // Stops accepting, releases held requests and joins every connection.
  void Stop();
  uint16_t port() const { return port_; }

 private:
  struct Connection;
  struct Impl;

  void AcceptLoop();
  void Serve(Connection& connection);
  void ReapFinished();

  Gateway& gateway_;
  ProxyOptions options_;
  std::unique_ptr<Impl> impl_;
  std::thread accept_thread_;
  std::mutex connections_mu_;
  std::list<std::unique_ptr<Connection>> connections_;
  std::atomic<bool> stopping_{false};
  uint16_t port_ = 0;
};

}  // namespace xssguard

#endif  // XSSGUARD_PROXY_SERVER_H_
