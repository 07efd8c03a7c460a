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

// xssguard: filtering forward proxy with a local management service.

#include <csignal>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "xssguard/mgmt_api.h"
#include "xssguard/proxy_server.h"

namespace {

volatile std::sig_atomic_t g_stop = 0;

void OnSignal(int) { g_stop = 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Client-side XSS mitigation proxy"};

  std::string listen = "127.0.0.1:8118";
  std::string mgmt_listen = "127.0.0.1:8119";
  uint64_t threshold_bits = 50;
  std::string rules_file;
  double alert_timeout_secs = 30;
  bool no_inject = false;
  size_t max_body_bytes = 8 * 1024 * 1024;
  std::string log_level = "info";
  bool permanent_deny_overrides = false;
  bool navigation_heuristic = false;
  std::vector<std::string> upstream_overrides;

  app.add_option("--listen", listen, "Proxy address (host:port)")
      ->capture_default_str();
  app.add_option("--mgmt-listen", mgmt_listen,
                 "Management API address (host:port)")
      ->capture_default_str();
  app.add_option("--threshold-bits", threshold_bits,
                 "Leakage budget per page in bits")
      ->capture_default_str();
  app.add_option("--rules-file", rules_file,
                 "JSON-lines file holding permanent rules");
  app.add_option("--alert-timeout-secs", alert_timeout_secs,
                 "Seconds a held request waits before it is denied")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--no-inject", no_inject, "Do not inject the control script");
  app.add_option("--max-body-bytes", max_body_bytes,
                 "Largest HTML/CSS body that is analyzed")
      ->capture_default_str();
  app.add_option("--log-level", log_level,
                 "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error",
                             "critical", "off"}))
      ->capture_default_str();
  app.add_flag("--permanent-deny-overrides", permanent_deny_overrides,
               "Let permanent deny rules win over temporary allow rules");
  app.add_flag("--navigation-heuristic", navigation_heuristic,
               "Treat GETs preferring text/html as navigations");
  app.add_option("--upstream-override", upstream_overrides,
                 "Route a domain to a fixed address: domain=host:port");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(log_level));

  auto proxy_addr = xssguard::ParseHostPort(listen, 8118);
  auto mgmt_addr = xssguard::ParseHostPort(mgmt_listen, 8119);
  if (!proxy_addr || !mgmt_addr) {
    std::cerr << "invalid --listen or --mgmt-listen address\n";
    return 2;
  }

  xssguard::GatewayConfig config;
  config.threshold_bits = threshold_bits;
  config.alert_timeout = std::chrono::milliseconds(
      static_cast<int64_t>(alert_timeout_secs * 1000));
  config.inject = !no_inject;
  config.max_body_bytes = max_body_bytes;
  if (!rules_file.empty()) config.rules_file = rules_file;
  config.permanent_deny_overrides = permanent_deny_overrides;
  config.navigation_heuristic = navigation_heuristic;

  xssguard::ProxyOptions proxy_options;
  proxy_options.host = proxy_addr->first;
  proxy_options.port = proxy_addr->second;
  for (const std::string& item : upstream_overrides) {
    size_t eq = item.find('=');
    auto target = eq == std::string::npos
                      ? std::nullopt
                      : xssguard::ParseHostPort(item.substr(eq + 1), 80);
    if (!target) {
      std::cerr << "invalid --upstream-override '" << item << "'\n";
      return 2;
    }
    proxy_options.upstream_overrides.push_back(
        {item.substr(0, eq), target->first, target->second});
  }

  try {
    xssguard::Gateway gateway(config);
    xssguard::MgmtServer mgmt(gateway,
                              {mgmt_addr->first, mgmt_addr->second});
    xssguard::ProxyServer proxy(gateway, proxy_options);
    if (!mgmt.Start() || !proxy.Start()) return 1;

    std::signal(SIGINT, OnSignal);
    std::signal(SIGTERM, OnSignal);
    while (!g_stop) {
      std::this_thread::sleep_for(std::chrono::milliseconds(200));
    }
    spdlog::info("shutting down");
    proxy.Stop();
    mgmt.Stop();
  } catch (const std::exception& e) {
    spdlog::critical("{}", e.what());
    return 1;
  }
  return 0;
}
