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

#ifndef XSSGUARD_ALERT_QUEUE_H_
#define XSSGUARD_ALERT_QUEUE_H_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xssguard/http_message.h"
#include "xssguard/rules.h"

namespace xssguard {

enum class DecisionScope { kTemporary, kPermanent };
enum class TicketState { kPending, kDecided, kExpired };

std::string_view ToToken(DecisionScope scope);
std::string_view ToToken(TicketState state);
std::optional<DecisionScope> ParseDecisionScope(std::string_view token);

// A request held for an operator decision.
struct AlertTicket {
  std::string id;
  AbsoluteUrl request_url;
  std::optional<AbsoluteUrl> referrer;
  std::optional<ContextId> context_id;
  TimePoint created_at;
  TicketState state = TicketState::kPending;
  // Set once decided.
  std::optional<RuleAction> action;
  std::optional<DecisionScope> scope;
  std::optional<TimePoint> resolved_at;
  // Why an expired ticket expired: "timeout", "queue-full" or "shutdown".
  std::string expiry_cause;

  // Expired tickets resolve as deny.
  RuleAction outcome() const {
    return state == TicketState::kDecided && action ? *action
                                                    : RuleAction::kDeny;
  }
};

// Held-request queue. Not internally synchronized: every member must be
// called with the mutex that guards the surrounding filter state held, and
// AwaitDecision takes the lock on that mutex so it can release it while it
// waits. One producer per held request, any number of deciders.
class AlertQueue {
 public:
  enum class DecideResult { kOk, kNotFound, kAlreadyResolved };

  explicit AlertQueue(size_t capacity = 256, size_t history_limit = 1024);

  // Registers a held request. When `capacity` tickets are already pending
  // the new ticket is created expired ("queue-full") and resolves as deny.
  AlertTicket Enqueue(const ProxyRequest& request,
                      std::optional<ContextId> context);

  // Blocks until the ticket is decided or `timeout` passes; on timeout the
  // ticket expires. Returns the terminal ticket.
  AlertTicket AwaitDecision(std::unique_lock<std::mutex>& lock,
                            std::string_view id,
                            std::chrono::milliseconds timeout);

  // Records the operator's decision and wakes the one request holding the
  // ticket. A ticket is decided at most once.
  DecideResult Decide(std::string_view id, RuleAction action,
                      DecisionScope scope);

  // Expires every pending ticket with cause "shutdown" and releases anyone
  // in WaitForPending. Later tickets are still accepted.
  void Close();

  std::optional<AlertTicket> Find(std::string_view id) const;
  std::vector<AlertTicket> Pending() const;
  // Every retained ticket, oldest first (bounded by history_limit).
  std::vector<AlertTicket> History() const;
  size_t pending_count() const { return pending_; }

  // Waits (releasing `lock`) until at least one ticket is pending, the queue
  // is closed, or the timeout passes.
  void WaitForPending(std::unique_lock<std::mutex>& lock,
                      std::chrono::milliseconds timeout);

  void set_capacity(size_t capacity) { capacity_ = capacity; }
  size_t capacity() const { return capacity_; }

 private:
  struct Entry {
    AlertTicket ticket;
    std::condition_variable resolved;
  };

  void Resolve(Entry& entry);
  void TrimHistory();

  size_t capacity_;
  size_t history_limit_;
  uint64_t next_id_ = 1;
  size_t pending_ = 0;
  bool closed_ = false;
  std::map<std::string, std::shared_ptr<Entry>, std::less<>> entries_;
  std::deque<std::string> order_;
  std::condition_variable changed_;
};

}  // namespace xssguard

#endif  // XSSGUARD_ALERT_QUEUE_H_
