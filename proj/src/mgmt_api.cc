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

#include "xssguard/mgmt_api.h"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "xssguard/domain.h"

namespace xssguard {
namespace {

using nlohmann::json;

json Envelope(json body) {
  body["schema_version"] = kSchemaVersion;
  return body;
}

void Reply(httplib::Response& res, int status, json body) {
  res.status = status;
  res.set_content(Envelope(std::move(body)).dump(), "application/json");
}

void ReplyError(httplib::Response& res, int status, std::string message) {
  Reply(res, status, json{{"error", std::move(message)}});
}

json OptionalUrl(const std::optional<AbsoluteUrl>& url) {
  return url ? json(url->spec()) : json(nullptr);
}

json OptionalString(const std::optional<std::string>& s) {
  return s ? json(*s) : json(nullptr);
}

json ToJson(const LinkInventory& inventory) {
  auto specs = [](const std::set<AbsoluteUrl>& urls) {
    json out = json::array();
    for (const AbsoluteUrl& u : urls) out.push_back(u.spec());
    return out;
  };
  return json{{"external_links", specs(inventory.external_links)},
              {"local_links", specs(inventory.local_links)},
              {"frame_links", specs(inventory.frame_links)}};
}

json ToJson(const PageContext& context) {
  json followed = json::array();
  for (const AbsoluteUrl& u : context.ledger.followed()) {
    followed.push_back(u.spec());
  }
  return json{{"context_id", context.id},
              {"page_url", context.page_url.spec()},
              {"created_at", FormatRfc3339(context.created_at)},
              {"inventory", ToJson(context.inventory)},
              {"followed", std::move(followed)}};
}

// Parses {"kind": .., "value": ..}. Returns an error message on failure.
std::optional<std::string> ParsePattern(const json& node,
                                        std::optional<RulePattern>* out) {
  if (!node.is_object()) return "pattern must be an object";
  auto kind_it = node.find("kind");
  auto value_it = node.find("value");
  if (kind_it == node.end() || !kind_it->is_string()) {
    return "pattern.kind must be a string";
  }
  if (value_it == node.end() || !value_it->is_string()) {
    return "pattern.value must be a string";
  }
  auto kind = ParsePatternKind(kind_it->get<std::string>());
  if (!kind) return "unknown pattern kind";
  *out = RulePattern::Make(*kind, value_it->get<std::string>());
  if (!*out) return "invalid pattern value";
  return std::nullopt;
}

std::optional<json> ParseBody(const httplib::Request& req,
                              httplib::Response& res) {
  json body = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
  if (body.is_discarded() || !body.is_object()) {
    ReplyError(res, 400, "body must be a JSON object");
    return std::nullopt;
  }
  return body;
}

}  // namespace

json ToJson(const AlertTicket& ticket) {
  json out{{"id", ticket.id},
           {"request_url", ticket.request_url.spec()},
           {"referrer", OptionalUrl(ticket.referrer)},
           {"context_id", OptionalString(ticket.context_id)},
           {"created_at", FormatRfc3339(ticket.created_at)},
           {"state", ToToken(ticket.state)},
           {"outcome", ToToken(ticket.outcome())}};
  out["action"] = ticket.action ? json(ToToken(*ticket.action)) : json(nullptr);
  out["scope"] = ticket.scope ? json(ToToken(*ticket.scope)) : json(nullptr);
  out["resolved_at"] = ticket.resolved_at
                           ? json(FormatRfc3339(*ticket.resolved_at))
                           : json(nullptr);
  out["expiry_cause"] = ticket.expiry_cause.empty()
                            ? json(nullptr)
                            : json(ticket.expiry_cause);
  return out;
}

json ToJson(const FilterRule& rule) {
  return json{
      {"id", rule.id},
      {"pattern",
       {{"kind", ToToken(rule.pattern.kind())},
        {"value", rule.pattern.value()}}},
      {"action", ToToken(rule.action)},
      {"lifetime", rule.is_temporary() ? "temporary" : "permanent"},
      {"context_id", OptionalString(rule.owner)},
      {"origin", ToToken(rule.origin)},
      {"created_at", FormatRfc3339(rule.created_at)},
  };
}

json ToJson(const LedgerSnapshot& ledger) {
  return json{{"context_id", ledger.context_id},
              {"page_url", ledger.page_url.spec()},
              {"n", ledger.n},
              {"r", ledger.r},
              {"bits", ledger.bits},
              {"threshold", ledger.threshold},
              {"created_at", FormatRfc3339(ledger.created_at)}};
}

json ToJson(const ExtractionStats& stats) {
  return json{{"documents", stats.documents},
              {"stylesheets", stats.stylesheets},
              {"link_attributes", stats.link_attributes},
              {"unparseable", stats.unparseable},
              {"script_bearing", stats.script_bearing},
              {"frames", stats.frames}};
}

json ConfigToJson(const GatewayConfig& config) {
  return json{
      {"threshold_bits", config.threshold_bits},
      {"alert_timeout_secs",
       std::chrono::duration<double>(config.alert_timeout).count()},
      {"inject", config.inject},
      {"max_body_bytes", config.max_body_bytes},
      {"rules_file",
       config.rules_file ? json(config.rules_file->string()) : json(nullptr)},
      {"permanent_deny_overrides", config.permanent_deny_overrides},
      {"navigation_heuristic", config.navigation_heuristic},
      {"alert_queue_capacity", config.alert_queue_capacity},
      {"max_contexts", config.max_contexts},
      {"public_suffix_version", std::string(PublicSuffixTableVersion())},
  };
}

json SnapshotState(const Gateway& gateway) {
  StateSnapshot snap = gateway.Snapshot();
  json rules = json::array();
  for (const FilterRule& r : snap.rules) rules.push_back(ToJson(r));
  json contexts = json::array();
  for (const PageContext& c : snap.contexts) contexts.push_back(ToJson(c));
  json ledgers = json::array();
  for (const LedgerSnapshot& l : snap.ledgers) ledgers.push_back(ToJson(l));
  json alerts = json::array();
  for (const AlertTicket& t : snap.alerts) alerts.push_back(ToJson(t));
  json actions = json::object();
  for (const auto& [reason, count] : snap.stats.actions) {
    actions[reason] = count;
  }
  json stats{{"extraction", ToJson(snap.stats.extraction)},
             {"actions", std::move(actions)},
             {"requests", snap.stats.requests},
             {"prompts", snap.stats.prompts},
             {"contexts_created", snap.stats.contexts_created},
             {"responses_rewritten", snap.stats.responses_rewritten},
             {"passthrough_oversized", snap.stats.passthrough_oversized},
             {"passthrough_undecodable", snap.stats.passthrough_undecodable}};
  return Envelope(json{{"rules", std::move(rules)},
                       {"contexts", std::move(contexts)},
                       {"ledgers", std::move(ledgers)},
                       {"alerts", std::move(alerts)},
                       {"stats", std::move(stats)},
                       {"config", ConfigToJson(snap.config)}});
}

MgmtServer::MgmtServer(Gateway& gateway, MgmtOptions options)
    : gateway_(gateway),
      options_(std::move(options)),
      server_(std::make_unique<httplib::Server>()) {
  RegisterRoutes();
}

MgmtServer::~MgmtServer() { Stop(); }

bool MgmtServer::Start() {
  if (options_.port == 0) {
    port_ = server_->bind_to_any_port(options_.host);
  } else {
    port_ = server_->bind_to_port(options_.host, options_.port)
                ? options_.port
                : -1;
  }
  if (port_ <= 0) {
    spdlog::error("mgmt: cannot bind {}:{}", options_.host, options_.port);
    return false;
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  spdlog::info("mgmt: listening on {}:{}", options_.host, port_);
  return true;
}

void MgmtServer::Stop() {
  if (!thread_.joinable()) return;
  server_->stop();
  thread_.join();
}

void MgmtServer::RegisterRoutes() {
  httplib::Server& s = *server_;

  s.Get("/api/alerts", [this](const httplib::Request& req,
                              httplib::Response& res) {
    std::vector<AlertTicket> alerts;
    if (req.get_param_value("wait") == "1") {
      alerts = gateway_.WaitForPendingAlerts(options_.long_poll_wait);
    } else if (req.get_param_value("all") == "1") {
      alerts = gateway_.Snapshot().alerts;
    } else {
      alerts = gateway_.PendingAlerts();
    }
    json list = json::array();
    for (const AlertTicket& t : alerts) list.push_back(ToJson(t));
    Reply(res, 200, json{{"alerts", std::move(list)}});
  });

  s.Get(R"(/api/alerts/([^/]+))", [this](const httplib::Request& req,
                                         httplib::Response& res) {
    auto ticket = gateway_.FindAlert(req.matches[1].str());
    if (!ticket) return ReplyError(res, 404, "no such alert");
    Reply(res, 200, json{{"alert", ToJson(*ticket)}});
  });

  s.Post(R"(/api/alerts/([^/]+)/decision)", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
    auto body = ParseBody(req, res);
    if (!body) return;
    auto action_it = body->find("action");
    auto scope_it = body->find("scope");
    if (action_it == body->end() || !action_it->is_string()) {
      return ReplyError(res, 400, "action must be \"allow\" or \"deny\"");
    }
    auto action = ParseRuleAction(action_it->get<std::string>());
    if (!action) {
      return ReplyError(res, 400, "action must be \"allow\" or \"deny\"");
    }
    DecisionScope scope = DecisionScope::kTemporary;
    if (scope_it != body->end()) {
      auto parsed = scope_it->is_string()
                        ? ParseDecisionScope(scope_it->get<std::string>())
                        : std::nullopt;
      if (!parsed) {
        return ReplyError(res, 400,
                          "scope must be \"temporary\" or \"permanent\"");
      }
      scope = *parsed;
    }
    std::optional<DecisionPattern> pattern;
    if (auto it = body->find("pattern"); it != body->end()) {
      std::optional<RulePattern> parsed;
      if (auto err = ParsePattern(*it, &parsed)) {
        return ReplyError(res, 400, *err);
      }
      pattern = DecisionPattern{parsed->kind(), parsed->value()};
    }
    const std::string id = req.matches[1].str();
    switch (gateway_.DecideAlert(id, *action, scope, pattern)) {
      case AlertQueue::DecideResult::kNotFound:
        return ReplyError(res, 404, "no such alert");
      case AlertQueue::DecideResult::kAlreadyResolved:
        return ReplyError(res, 409, "alert already resolved");
      case AlertQueue::DecideResult::kOk:
        break;
    }
    auto ticket = gateway_.FindAlert(id);
    Reply(res, 200,
          json{{"alert", ticket ? ToJson(*ticket) : json(nullptr)}});
  });

  s.Get("/api/rules", [this](const httplib::Request&, httplib::Response& res) {
    json list = json::array();
    for (const FilterRule& r : gateway_.Rules()) list.push_back(ToJson(r));
    Reply(res, 200, json{{"rules", std::move(list)}});
  });

  s.Get(R"(/api/rules/([^/]+))", [this](const httplib::Request& req,
                                        httplib::Response& res) {
    auto rule = gateway_.FindRule(req.matches[1].str());
    if (!rule) return ReplyError(res, 404, "no such rule");
    Reply(res, 200, json{{"rule", ToJson(*rule)}});
  });

  s.Post("/api/rules", [this](const httplib::Request& req,
                              httplib::Response& res) {
    auto body = ParseBody(req, res);
    if (!body) return;
    auto pattern_it = body->find("pattern");
    if (pattern_it == body->end()) {
      return ReplyError(res, 400, "pattern is required");
    }
    std::optional<RulePattern> pattern;
    if (auto err = ParsePattern(*pattern_it, &pattern)) {
      return ReplyError(res, 400, *err);
    }
    auto action_it = body->find("action");
    auto action = action_it != body->end() && action_it->is_string()
                      ? ParseRuleAction(action_it->get<std::string>())
                      : std::nullopt;
    if (!action) {
      return ReplyError(res, 400, "action must be \"allow\" or \"deny\"");
    }
    std::string lifetime = body->value("lifetime", std::string("permanent"));
    if (lifetime == "permanent") {
      FilterRule rule = gateway_.AddPermanentRule(*pattern, *action);
      return Reply(res, 201, json{{"rule", ToJson(rule)}});
    }
    if (lifetime != "temporary") {
      return ReplyError(res, 400,
                        "lifetime must be \"temporary\" or \"permanent\"");
    }
    auto ctx_it = body->find("context_id");
    if (ctx_it == body->end() || !ctx_it->is_string()) {
      return ReplyError(res, 400, "temporary rules need a context_id");
    }
    auto rule = gateway_.AddTemporaryRule(ctx_it->get<std::string>(),
                                          *pattern, *action);
    if (!rule) return ReplyError(res, 404, "no such context");
    Reply(res, 201, json{{"rule", ToJson(*rule)}});
  });

  s.Delete(R"(/api/rules/([^/]+))", [this](const httplib::Request& req,
                                           httplib::Response& res) {
    const std::string id = req.matches[1].str();
    if (!gateway_.DeleteRule(id)) return ReplyError(res, 404, "no such rule");
    Reply(res, 200, json{{"deleted", id}});
  });

  s.Get("/api/contexts", [this](const httplib::Request&,
                                httplib::Response& res) {
    json list = json::array();
    for (const LedgerSnapshot& l : gateway_.Ledgers()) {
      list.push_back(ToJson(l));
    }
    Reply(res, 200, json{{"contexts", std::move(list)}});
  });

  s.Get("/api/config", [this](const httplib::Request&,
                              httplib::Response& res) {
    Reply(res, 200, json{{"config", ConfigToJson(gateway_.config())}});
  });

  s.Patch("/api/config", [this](const httplib::Request& req,
                                httplib::Response& res) {
    auto body = ParseBody(req, res);
    if (!body) return;
    for (const auto& [key, value] : body->items()) {
      if (key != "threshold_bits") {
        return ReplyError(res, 400, "field not patchable: " + key);
      }
      if (!value.is_number_unsigned()) {
        return ReplyError(res, 400,
                          "threshold_bits must be a non-negative integer");
      }
    }
    if (auto it = body->find("threshold_bits"); it != body->end()) {
      gateway_.SetThresholdBits(it->get<uint64_t>());
    }
    Reply(res, 200, json{{"config", ConfigToJson(gateway_.config())}});
  });

  s.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
    res.status = 200;
    res.set_content(SnapshotState(gateway_).dump(), "application/json");
  });

  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    json body{{"error", res.status == 404 ? "not found" : "request failed"}};
    res.set_content(Envelope(std::move(body)).dump(), "application/json");
  });
}

}  // namespace xssguard
