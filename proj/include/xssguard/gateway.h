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

// The filtering core of the proxy, independent of sockets.
//
// A Gateway owns all shared filter state: rules, page contexts with their
// link inventories and leakage ledgers, and the alert queue. Everything is
// guarded by one mutex, so the read-decide-update step for a request is
// atomic with respect to every other request. A request waiting for an
// operator decision releases the mutex while it waits.
//
// Page contexts. A request without a Referer (or, with the navigation
// heuristic on, a GET that prefers text/html) is a top-level navigation and
// gets a fresh context keyed by its URL, replacing any previous one.
// Subresource requests are attributed through their Referer. An HTML
// response fetched from a page merges into that page's context when it is
// in the same registrable domain (a local frame) and gets its own context
// otherwise. Stylesheets fetched from a page add their url() links to the
// page's context, and requests whose Referer is the stylesheet are
// attributed to the page.

#ifndef XSSGUARD_GATEWAY_H_
#define XSSGUARD_GATEWAY_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "xssguard/alert_queue.h"
#include "xssguard/http_message.h"
#include "xssguard/link_extractor.h"
#include "xssguard/policy.h"
#include "xssguard/rules.h"

namespace xssguard {

struct GatewayConfig {
  uint64_t threshold_bits = 50;
  std::chrono::milliseconds alert_timeout{std::chrono::seconds(30)};
  bool inject = true;
  size_t max_body_bytes = 8 * 1024 * 1024;
  std::optional<std::filesystem::path> rules_file;
  bool permanent_deny_overrides = false;
  bool navigation_heuristic = false;
  size_t alert_queue_capacity = 256;
  size_t max_contexts = 4096;
};

struct GatewayStats {
  ExtractionStats extraction;
  std::map<std::string, uint64_t> actions;  // by reason token
  uint64_t requests = 0;
  uint64_t prompts = 0;
  uint64_t contexts_created = 0;
  uint64_t responses_rewritten = 0;
  uint64_t passthrough_oversized = 0;
  uint64_t passthrough_undecodable = 0;
};

struct LedgerSnapshot {
  ContextId context_id;
  AbsoluteUrl page_url;
  uint64_t n = 0;
  uint64_t r = 0;
  uint64_t bits = 0;
  uint64_t threshold = 0;
  TimePoint created_at;
};

// Consistent point-in-time copy of the filter state.
struct StateSnapshot {
  std::vector<FilterRule> rules;
  std::vector<PageContext> contexts;
  std::vector<LedgerSnapshot> ledgers;
  std::vector<AlertTicket> alerts;
  GatewayStats stats;
  GatewayConfig config;
};

// Optional override for how an operator decision becomes a rule.
struct DecisionPattern {
  PatternKind kind;
  std::optional<std::string> value;  // defaults derived from the request URL
};

class Gateway {
 public:
  // Loads permanent rules from config.rules_file when set. Throws
  // std::runtime_error if that file is malformed.
  explicit Gateway(GatewayConfig config);
  ~Gateway();

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  // Decides `request`. A Prompt is resolved here: the call blocks until the
  // operator decides or the alert times out, so the returned action is
  // always Forward or Deny.
  ProxyAction HandleRequest(const ProxyRequest& request);

  // Rewrites the upstream response of a forwarded request: HTML is analyzed,
  // its links registered and the control script injected; CSS contributes
  // url() links; everything else passes through untouched.
  HttpResponse ProcessResponse(const ProxyRequest& request,
                               const ProxyAction& action,
                               HttpResponse response);

  // Starts a fresh context for `request`'s URL (see class comment).
  PageContext EstablishPageContext(const ProxyRequest& request);

  bool IsTopLevelNavigation(const ProxyRequest& request) const;

  // Management surface -------------------------------------------------------

  std::vector<AlertTicket> PendingAlerts() const;
  // Long-poll: returns once at least one alert is pending or after `wait`.
  std::vector<AlertTicket> WaitForPendingAlerts(std::chrono::milliseconds wait);
  std::optional<AlertTicket> FindAlert(std::string_view id) const;
  AlertQueue::DecideResult DecideAlert(
      std::string_view id, RuleAction action, DecisionScope scope,
      std::optional<DecisionPattern> pattern = std::nullopt);

  std::vector<FilterRule> Rules() const;
  std::optional<FilterRule> FindRule(std::string_view id) const;
  FilterRule AddPermanentRule(RulePattern pattern, RuleAction action);
  // Temporary rule for a live context; nullopt if the context is gone.
  std::optional<FilterRule> AddTemporaryRule(const ContextId& context,
                                             RulePattern pattern,
                                             RuleAction action);
  bool DeleteRule(std::string_view id);

  std::vector<LedgerSnapshot> Ledgers() const;
  std::optional<PageContext> FindContext(const ContextId& id) const;
  size_t context_count() const;
  // Ends a context, dropping its temporary rules.
  bool DropContext(const ContextId& id);

  GatewayConfig config() const;
  void SetThresholdBits(uint64_t bits);

  StateSnapshot Snapshot() const;

  // Expires all pending alerts so held requests return promptly.
  void Shutdown();

 private:
  PageContext* ContextForUrlLocked(const std::optional<AbsoluteUrl>& url);
  PageContext* ContextByIdLocked(const std::optional<ContextId>& id);
  PageContext& EstablishLocked(const AbsoluteUrl& page_url);
  void DropContextLocked(const ContextId& id);
  PageContext& HtmlOwnerLocked(const ProxyRequest& request,
                               const ProxyAction& action);
  ProxyAction ResolvePromptLocked(std::unique_lock<std::mutex>& lock,
                                  const ProxyRequest& request,
                                  const ProxyAction& prompt);
  void PersistRulesLocked();
  LedgerSnapshot LedgerLocked(const PageContext& context) const;

  mutable std::mutex mu_;
  GatewayConfig config_;
  RuleStore rules_;
  std::map<ContextId, PageContext> contexts_;
  // Page URLs and attributed resource URLs (local frames, stylesheets).
  std::map<AbsoluteUrl, ContextId> context_index_;
  AlertQueue alerts_;
  GatewayStats stats_;
  uint64_t next_context_ = 1;
  uint64_t persisted_generation_ = 0;
  bool shut_down_ = false;
};

}  // namespace xssguard

#endif  // XSSGUARD_GATEWAY_H_
