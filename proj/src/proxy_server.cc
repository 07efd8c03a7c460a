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

#include "xssguard/proxy_server.h"

#include <sys/socket.h>
#include <sys/time.h>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <spdlog/spdlog.h>

#include "xssguard/strings.h"

namespace xssguard {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
using tcp = asio::ip::tcp;

struct ProxyServer::Impl {
  asio::io_context io;
  tcp::acceptor acceptor{io};
};

struct ProxyServer::Connection {
  std::thread thread;
  tcp::socket client;
  std::mutex mu;
  tcp::socket* upstream = nullptr;  // guarded by mu
  std::atomic<bool> done{false};

  explicit Connection(tcp::socket socket) : client(std::move(socket)) {}

  void SetUpstream(tcp::socket* socket) {
    std::lock_guard lock(mu);
    upstream = socket;
  }

  // Unblocks any pending read or write on this connection.
  void Abort() {
    ::shutdown(client.native_handle(), SHUT_RDWR);
    std::lock_guard lock(mu);
    if (upstream != nullptr) ::shutdown(upstream->native_handle(), SHUT_RDWR);
  }
};

namespace {

constexpr std::string_view kHopByHop[] = {
    "connection", "keep-alive",         "proxy-connection",
    "proxy-authenticate", "proxy-authorization", "te",
    "trailer",    "transfer-encoding",  "upgrade",
};

bool IsHopByHop(std::string_view name, const std::vector<std::string>& extra) {
  const std::string lower = ToLowerAscii(name);
  for (std::string_view h : kHopByHop) {
    if (lower == h) return true;
  }
  for (const std::string& e : extra) {
    if (lower == e) return true;
  }
  return false;
}

std::string_view ToStd(beast::string_view s) { return {s.data(), s.size()}; }

void SetTimeouts(tcp::socket& socket, std::chrono::seconds timeout) {
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(timeout.count());
  ::setsockopt(socket.native_handle(), SOL_SOCKET, SO_RCVTIMEO, &tv,
               sizeof(tv));
  ::setsockopt(socket.native_handle(), SOL_SOCKET, SO_SNDTIMEO, &tv,
               sizeof(tv));
}

http::response<http::string_body> PlainResponse(http::status status,
                                                 unsigned version,
                                                 std::string body) {
  http::response<http::string_body> res{status, version};
  res.set(http::field::content_type, "text/plain; charset=utf-8");
  res.set(http::field::cache_control, "no-store");
  res.body() = std::move(body);
  res.prepare_payload();
  return res;
}

}  // namespace

std::optional<std::pair<std::string, uint16_t>> ParseHostPort(
    std::string_view text, uint16_t default_port) {
  std::string host;
  std::string_view rest;
  if (text.starts_with('[')) {
    size_t close = text.find(']');
    if (close == std::string_view::npos) return std::nullopt;
    host = std::string(text.substr(1, close - 1));
    rest = text.substr(close + 1);
  } else {
    size_t colon = text.rfind(':');
    host = std::string(text.substr(0, colon));
    rest = colon == std::string_view::npos ? std::string_view()
                                           : text.substr(colon);
  }
  if (host.empty()) return std::nullopt;
  uint16_t port = default_port;
  if (!rest.empty()) {
    if (rest.front() != ':' || rest.size() < 2 || rest.size() > 6) {
      return std::nullopt;
    }
    unsigned value = 0;
    for (char c : rest.substr(1)) {
      if (!IsAsciiDigit(c)) return std::nullopt;
      value = value * 10 + static_cast<unsigned>(c - '0');
    }
    if (value > 65535) return std::nullopt;
    port = static_cast<uint16_t>(value);
  }
  return std::make_pair(std::move(host), port);
}

std::optional<std::string> FilterAcceptEncoding(std::string_view value) {
  std::string out;
  size_t start = 0;
  while (start <= value.size()) {
    size_t comma = value.find(',', start);
    if (comma == std::string_view::npos) comma = value.size();
    std::string_view item =
        TrimAsciiWhitespace(value.substr(start, comma - start));
    std::string coding =
        ToLowerAscii(TrimAsciiWhitespace(item.substr(0, item.find(';'))));
    if (coding == "gzip" || coding == "x-gzip" || coding == "deflate" ||
        coding == "identity") {
      if (!out.empty()) out += ", ";
      out += item;
    }
    start = comma + 1;
  }
  if (out.empty()) return std::nullopt;
  return out;
}

ProxyServer::ProxyServer(Gateway& gateway, ProxyOptions options)
    : gateway_(gateway),
      options_(std::move(options)),
      impl_(std::make_unique<Impl>()) {}

ProxyServer::~ProxyServer() { Stop(); }

bool ProxyServer::Start() {
  beast::error_code ec;
  auto address = asio::ip::make_address(options_.host, ec);
  if (ec) {
    spdlog::error("proxy: bad listen address '{}'", options_.host);
    return false;
  }
  tcp::endpoint endpoint(address, options_.port);
  tcp::acceptor& acceptor = impl_->acceptor;
  acceptor.open(endpoint.protocol(), ec);
  if (!ec) acceptor.set_option(asio::socket_base::reuse_address(true), ec);
  if (!ec) acceptor.bind(endpoint, ec);
  if (!ec) acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec) {
    spdlog::error("proxy: cannot listen on {}:{}: {}", options_.host,
                  options_.port, ec.message());
    return false;
  }
  port_ = acceptor.local_endpoint().port();
  accept_thread_ = std::thread([this] { AcceptLoop(); });
  spdlog::info("proxy: listening on {}:{}", options_.host, port_);
  return true;
}

void ProxyServer::Stop() {
  if (!accept_thread_.joinable()) return;
  stopping_ = true;
  // shutdown() wakes a thread blocked in accept() on Linux.
  ::shutdown(impl_->acceptor.native_handle(), SHUT_RDWR);
  accept_thread_.join();
  beast::error_code ec;
  impl_->acceptor.close(ec);
  gateway_.Shutdown();
  std::list<std::unique_ptr<Connection>> connections;
  {
    std::lock_guard lock(connections_mu_);
    connections.swap(connections_);
  }
  for (auto& c : connections) c->Abort();
  for (auto& c : connections) {
    if (c->thread.joinable()) c->thread.join();
  }
}

void ProxyServer::AcceptLoop() {
  while (!stopping_) {
    beast::error_code ec;
    tcp::socket socket(impl_->io);
    impl_->acceptor.accept(socket, ec);
    if (ec) {
      if (stopping_) break;
      spdlog::warn("proxy: accept failed: {}", ec.message());
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
      continue;
    }
    ReapFinished();
    auto connection = std::make_unique<Connection>(std::move(socket));
    Connection* raw = connection.get();
    std::lock_guard lock(connections_mu_);
    if (stopping_) break;
    connections_.push_back(std::move(connection));
    raw->thread = std::thread([this, raw] {
      Serve(*raw);
      raw->done = true;
    });
  }
}

void ProxyServer::ReapFinished() {
  std::list<std::unique_ptr<Connection>> finished;
  {
    std::lock_guard lock(connections_mu_);
    for (auto it = connections_.begin(); it != connections_.end();) {
      if ((*it)->done) {
        finished.push_back(std::move(*it));
        it = connections_.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (auto& c : finished) {
    if (c->thread.joinable()) c->thread.join();
  }
}

namespace {

class Session {
 public:
  Session(Gateway& gateway, const ProxyOptions& options,
          tcp::socket& client, std::function<void(tcp::socket*)> set_upstream)
      : gateway_(gateway),
        options_(options),
        client_(client),
        set_upstream_(std::move(set_upstream)) {}

  void Run() {
    beast::flat_buffer buffer;
    for (;;) {
      http::request_parser<http::string_body> parser;
      parser.body_limit(options_.max_request_body_bytes);
      beast::error_code ec;
      http::read(client_, buffer, parser, ec);
      if (ec == http::error::end_of_stream || ec == asio::error::eof) return;
      if (ec) {
        if (ec != asio::error::connection_reset &&
            ec != asio::error::operation_aborted &&
            ec != asio::error::bad_descriptor) {
          spdlog::debug("proxy: read failed: {}", ec.message());
          if (ec.category() ==
              http::make_error_code(http::error::bad_target).category()) {
            Write(PlainResponse(http::status::bad_request, 11,
                                "malformed request\n"));
          }
        }
        return;
      }
      http::request<http::string_body>& req = parser.get();
      if (req.method() == http::verb::connect) {
        Tunnel(req, buffer);
        return;
      }
      if (!Exchange(req)) return;
      if (!req.keep_alive()) return;
    }
  }

 private:
  // Handles one request. Returns false if the connection is unusable.
  bool Exchange(http::request<http::string_body>& req) {
    const unsigned version = req.version();
    const bool keep_alive = req.keep_alive();
    HeaderList headers;
    for (const auto& field : req) {
      headers.Add(std::string(field.name_string()),
                  std::string(field.value()));
    }
    auto request = ProxyRequest::FromWire(std::string(req.method_string()),
                                          ToStd(req.target()), std::move(headers),
                                          std::move(req.body()));
    if (!request) {
      auto res = PlainResponse(http::status::bad_request, version,
                               "request target is not an absolute URL\n");
      res.keep_alive(keep_alive);
      return Write(std::move(res));
    }

    ProxyAction action = gateway_.HandleRequest(*request);
    if (action.kind != ActionKind::kForward) {
      std::string reason(ToToken(action.reason));
      spdlog::info("deny {} {} ({})", request->method, request->url.spec(),
                   reason);
      auto res = PlainResponse(http::status::forbidden, version,
                               "Request blocked: " + reason + "\n");
      res.set("X-Filter-Reason", reason);
      res.keep_alive(keep_alive);
      return Write(std::move(res));
    }

    std::string error;
    std::optional<HttpResponse> upstream = Fetch(*request, &error);
    if (!upstream) {
      spdlog::warn("upstream {} failed: {}", request->url.spec(), error);
      auto res = PlainResponse(http::status::bad_gateway, version,
                               "upstream unreachable: " + error + "\n");
      res.keep_alive(keep_alive);
      return Write(std::move(res));
    }
    HttpResponse out =
        gateway_.ProcessResponse(*request, action, std::move(*upstream));

    http::response<http::string_body> res;
    res.version(version);
    res.result(static_cast<unsigned>(out.status));
    res.reason(out.reason);
    std::vector<std::string> extra;
    for (const auto& [name, value] : out.headers) {
      if (EqualsIgnoreCase(name, "connection")) {
        for (std::string& t : SplitTokens(value)) extra.push_back(t);
      }
    }
    std::optional<std::string> head_length;
    for (const auto& [name, value] : out.headers) {
      if (IsHopByHop(name, extra)) continue;
      if (EqualsIgnoreCase(name, "content-length")) {
        head_length = value;
        continue;
      }
      res.insert(name, value);
    }
    res.body() = std::move(out.body);
    if (request->method == "HEAD") {
      // No body follows; keep the entity length the origin announced.
      if (head_length) res.set(http::field::content_length, *head_length);
    } else {
      res.prepare_payload();
    }
    res.keep_alive(keep_alive);
    return Write(std::move(res));
  }

  static std::vector<std::string> SplitTokens(std::string_view value) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= value.size()) {
      size_t comma = value.find(',', start);
      if (comma == std::string_view::npos) comma = value.size();
      std::string token = ToLowerAscii(
          TrimAsciiWhitespace(value.substr(start, comma - start)));
      if (!token.empty()) out.push_back(std::move(token));
      start = comma + 1;
    }
    return out;
  }

  template <typename Response>
  bool Write(Response&& res) {
    beast::error_code ec;
    http::write(client_, res, ec);
    return !ec;
  }

  std::pair<std::string, uint16_t> Route(const std::string& host,
                                         uint16_t port) const {
    for (const UpstreamOverride& o : options_.upstream_overrides) {
      const std::string& s = o.host_suffix;
      if (host == s || (host.size() > s.size() && host.ends_with(s) &&
                        host[host.size() - s.size() - 1] == '.')) {
        return {o.address, o.port};
      }
    }
    return {host, port};
  }

  bool Connect(tcp::socket& socket, const std::string& host, uint16_t port,
               std::string* error) {
    auto [address, target_port] = Route(host, port);
    // IPv6 literals arrive bracketed from URLs; the resolver wants them bare.
    if (address.size() > 2 && address.front() == '[' && address.back() == ']') {
      address = address.substr(1, address.size() - 2);
    }
    beast::error_code ec;
    tcp::resolver resolver(socket.get_executor());
    auto endpoints = resolver.resolve(address, std::to_string(target_port),
                                      ec);
    if (!ec) asio::connect(socket, endpoints, ec);
    if (ec) {
      *error = ec.message();
      return false;
    }
    SetTimeouts(socket, options_.upstream_timeout);
    return true;
  }

  std::optional<HttpResponse> Fetch(const ProxyRequest& request,
                                    std::string* error) {
    if (request.url.scheme != "http") {
      *error = "unsupported scheme " + request.url.scheme;
      return std::nullopt;
    }
    tcp::socket upstream(client_.get_executor());
    if (!Connect(upstream, request.url.host,
                 static_cast<uint16_t>(request.url.port), error)) {
      return std::nullopt;
    }
    set_upstream_(&upstream);
    struct Clear {
      std::function<void(tcp::socket*)>& f;
      ~Clear() { f(nullptr); }
    } clear{set_upstream_};

    http::request<http::string_body> out;
    out.version(11);
    out.method_string(request.method);
    std::string target = request.url.path;
    if (request.url.query) target += "?" + *request.url.query;
    out.target(target);
    std::vector<std::string> extra;
    for (const auto& [name, value] : request.headers) {
      if (EqualsIgnoreCase(name, "connection")) {
        for (std::string& t : SplitTokens(value)) extra.push_back(t);
      }
    }
    for (const auto& [name, value] : request.headers) {
      if (IsHopByHop(name, extra) || EqualsIgnoreCase(name, "host") ||
          EqualsIgnoreCase(name, "content-length") ||
          StartsWithIgnoreCase(name, "proxy-")) {
        continue;
      }
      if (EqualsIgnoreCase(name, "accept-encoding")) {
        if (auto filtered = FilterAcceptEncoding(value)) {
          out.insert(name, *filtered);
        }
        continue;
      }
      out.insert(name, value);
    }
    std::string host = request.url.host;
    if (!request.url.has_default_port()) {
      host += ":" + std::to_string(request.url.port);
    }
    out.set(http::field::host, host);
    out.set(http::field::connection, "close");
    out.body() = request.body;
    if (!request.body.empty() || request.method == "POST" ||
        request.method == "PUT" || request.method == "PATCH") {
      out.prepare_payload();
    }

    beast::error_code ec;
    http::write(upstream, out, ec);
    if (ec) {
      *error = ec.message();
      return std::nullopt;
    }
    beast::flat_buffer buffer;
    http::response_parser<http::string_body> parser;
    parser.body_limit(options_.max_response_body_bytes);
    if (request.method == "HEAD") parser.skip(true);
    http::read(upstream, buffer, parser, ec);
    // Responses delimited by connection close legitimately end in EOF.
    if (ec && !(ec == http::error::end_of_stream && parser.is_done())) {
      *error = ec.message();
      return std::nullopt;
    }
    auto& in = parser.get();
    HttpResponse response;
    response.status = static_cast<int>(in.result_int());
    response.reason = std::string(in.reason());
    for (const auto& field : in) {
      response.headers.Add(std::string(field.name_string()),
                           std::string(field.value()));
    }
    response.body = std::move(in.body());
    beast::error_code ignored;
    upstream.shutdown(tcp::socket::shutdown_both, ignored);
    return response;
  }

  void Tunnel(const http::request<http::string_body>& req,
              beast::flat_buffer& buffer) {
    auto target = ParseHostPort(ToStd(req.target()), 443);
    std::string error = "bad CONNECT target";
    tcp::socket upstream(client_.get_executor());
    if (!target || !Connect(upstream, target->first, target->second, &error)) {
      Write(PlainResponse(http::status::bad_gateway, req.version(),
                          "tunnel failed: " + error + "\n"));
      return;
    }
    // Tunnels carry long-lived traffic; drop the idle timeout.
    SetTimeouts(upstream, std::chrono::seconds(0));
    set_upstream_(&upstream);
    const std::string established =
        "HTTP/1.1 200 Connection Established\r\n\r\n";
    beast::error_code ec;
    asio::write(client_, asio::buffer(established), ec);
    if (!ec && buffer.size() > 0) {
      asio::write(upstream, buffer.data(), ec);
      buffer.consume(buffer.size());
    }
    if (!ec) {
      std::thread up([&] { Pump(client_, upstream); });
      Pump(upstream, client_);
      up.join();
    }
    set_upstream_(nullptr);
  }

  static void Pump(tcp::socket& from, tcp::socket& to) {
    std::array<char, 16 * 1024> chunk;
    beast::error_code ec;
    for (;;) {
      size_t n = from.read_some(asio::buffer(chunk), ec);
      if (ec || n == 0) break;
      asio::write(to, asio::buffer(chunk.data(), n), ec);
      if (ec) break;
    }
    ::shutdown(to.native_handle(), SHUT_WR);
    ::shutdown(from.native_handle(), SHUT_RD);
  }

  Gateway& gateway_;
  const ProxyOptions& options_;
  tcp::socket& client_;
  std::function<void(tcp::socket*)> set_upstream_;
};

}  // namespace

void ProxyServer::Serve(Connection& connection) {
  SetTimeouts(connection.client, std::chrono::seconds(300));
  Session session(gateway_, options_, connection.client,
                  [&connection](tcp::socket* s) { connection.SetUpstream(s); });
  try {
    session.Run();
  } catch (const std::exception& e) {
    spdlog::error("proxy: connection failed: {}", e.what());
  }
  beast::error_code ec;
  connection.client.shutdown(tcp::socket::shutdown_both, ec);
  connection.client.close(ec);
}

}  // namespace xssguard
