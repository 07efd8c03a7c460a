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

// Local management service (HTTP + JSON).
//
//   GET    /api/alerts[?wait=1]        pending alerts; wait=1 long-polls
//   GET    /api/alerts/{id}
//   POST   /api/alerts/{id}/decision   {"action":"allow|deny",
//                                       "scope":"temporary|permanent",
//                                       "pattern":{"kind":..,"value":..}?}
//   GET    /api/rules
//   POST   /api/rules                  {"pattern":{"kind","value"},
//                                       "action", "lifetime"?, "context_id"?}
//   GET    /api/rules/{id}
//   DELETE /api/rules/{id}
//   GET    /api/contexts               ledger per page context
//   GET    /api/config
//   PATCH  /api/config                 {"threshold_bits": int}
//   GET    /api/stats                  full state snapshot
//
// Every response body is a JSON object with "schema_version".

#ifndef XSSGUARD_MGMT_API_H_
#define XSSGUARD_MGMT_API_H_

#include <atomic>
#include <chrono>
#include <memory>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "xssguard/gateway.h"

namespace httplib {
class Server;
}

namespace xssguard {

inline constexpr int kSchemaVersion = 1;

nlohmann::json ToJson(const AlertTicket& ticket);
nlohmann::json ToJson(const FilterRule& rule);
nlohmann::json ToJson(const LedgerSnapshot& ledger);
nlohmann::json ToJson(const ExtractionStats& stats);
nlohmann::json ConfigToJson(const GatewayConfig& config);

// Rules, contexts with ledgers and inventories, extraction statistics,
// alert history and configuration, all from one consistent snapshot.
nlohmann::json SnapshotState(const Gateway& gateway);

struct MgmtOptions {
  std::string host = "127.0.0.1";
  int port = 8119;  // 0 picks a free port
  std::chrono::milliseconds long_poll_wait{std::chrono::seconds(25)};
};

class MgmtServer {
 public:
  MgmtServer(Gateway& gateway, MgmtOptions options);
  ~MgmtServer();

  MgmtServer(const MgmtServer&) = delete;
  MgmtServer& operator=(const MgmtServer&) = delete;

  // Binds and starts serving on a background thread. Returns false if the
  // address cannot be bound.
  bool Start();
  void Stop();
  int port() const { return port_; }

 private:
  void RegisterRoutes();

  Gateway& gateway_;
  MgmtOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace xssguard

#endif  // XSSGUARD_MGMT_API_H_
