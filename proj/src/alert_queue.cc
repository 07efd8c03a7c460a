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

#include "xssguard/alert_queue.h"

namespace xssguard {

std::string_view ToToken(DecisionScope scope) {
  return scope == DecisionScope::kTemporary ? "temporary" : "permanent";
}

std::string_view ToToken(TicketState state) {
  switch (state) {
    case TicketState::kPending:
      return "pending";
    case TicketState::kDecided:
      return "decided";
    case TicketState::kExpired:
      return "expired";
  }
  return "";
}

std::optional<DecisionScope> ParseDecisionScope(std::string_view token) {
  if (token == "temporary") return DecisionScope::kTemporary;
  if (token == "permanent") return DecisionScope::kPermanent;
  return std::nullopt;
}

AlertQueue::AlertQueue(size_t capacity, size_t history_limit)
    : capacity_(capacity), history_limit_(history_limit) {}

AlertTicket AlertQueue::Enqueue(const ProxyRequest& request,
                                std::optional<ContextId> context) {
  auto entry = std::make_shared<Entry>();
  AlertTicket& ticket = entry->ticket;
  ticket.id = "alert-" + std::to_string(next_id_++);
  ticket.request_url = request.url;
  ticket.referrer = request.referrer;
  ticket.context_id = std::move(context);
  ticket.created_at = Clock::now();
  if (pending_ >= capacity_) {
    ticket.state = TicketState::kExpired;
    ticket.expiry_cause = "queue-full";
    ticket.resolved_at = ticket.created_at;
  } else {
    ++pending_;
  }
  entries_.emplace(ticket.id, entry);
  order_.push_back(ticket.id);
  TrimHistory();
  changed_.notify_all();
  return ticket;
}

AlertTicket AlertQueue::AwaitDecision(std::unique_lock<std::mutex>& lock,
                                      std::string_view id,
                                      std::chrono::milliseconds timeout) {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    AlertTicket missing;
    missing.id = std::string(id);
    missing.state = TicketState::kExpired;
    missing.expiry_cause = "unknown";
    return missing;
  }
  std::shared_ptr<Entry> entry = it->second;
  entry->resolved.wait_for(lock, timeout, [&] {
    return entry->ticket.state != TicketState::kPending;
  });
  if (entry->ticket.state == TicketState::kPending) {
    entry->ticket.state = TicketState::kExpired;
    entry->ticket.expiry_cause = "timeout";
    Resolve(*entry);
  }
  return entry->ticket;
}

AlertQueue::DecideResult AlertQueue::Decide(std::string_view id,
                                            RuleAction action,
                                            DecisionScope scope) {
  auto it = entries_.find(id);
  if (it == entries_.end()) return DecideResult::kNotFound;
  Entry& entry = *it->second;
  if (entry.ticket.state != TicketState::kPending) {
    return DecideResult::kAlreadyResolved;
  }
  entry.ticket.state = TicketState::kDecided;
  entry.ticket.action = action;
  entry.ticket.scope = scope;
  Resolve(entry);
  return DecideResult::kOk;
}

void AlertQueue::Close() {
  closed_ = true;
  for (auto& [id, entry] : entries_) {
    if (entry->ticket.state != TicketState::kPending) continue;
    entry->ticket.state = TicketState::kExpired;
    entry->ticket.expiry_cause = "shutdown";
    Resolve(*entry);
  }
  changed_.notify_all();
}

void AlertQueue::Resolve(Entry& entry) {
  entry.ticket.resolved_at = Clock::now();
  --pending_;
  entry.resolved.notify_all();
  changed_.notify_all();
}

void AlertQueue::TrimHistory() {
  while (order_.size() > history_limit_) {
    auto it = entries_.find(order_.front());
    // Pending tickets are never dropped; stop at the oldest one.
    if (it != entries_.end() &&
        it->second->ticket.state == TicketState::kPending) {
      break;
    }
    if (it != entries_.end()) entries_.erase(it);
    order_.pop_front();
  }
}

std::optional<AlertTicket> AlertQueue::Find(std::string_view id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) return std::nullopt;
  return it->second->ticket;
}

std::vector<AlertTicket> AlertQueue::Pending() const {
  std::vector<AlertTicket> out;
  for (const std::string& id : order_) {
    auto it = entries_.find(id);
    if (it != entries_.end() &&
        it->second->ticket.state == TicketState::kPending) {
      out.push_back(it->second->ticket);
    }
  }
  return out;
}

std::vector<AlertTicket> AlertQueue::History() const {
  std::vector<AlertTicket> out;
  for (const std::string& id : order_) {
    if (auto it = entries_.find(id); it != entries_.end()) {
      out.push_back(it->second->ticket);
    }
  }
  return out;
}

void AlertQueue::WaitForPending(std::unique_lock<std::mutex>& lock,
                                std::chrono::milliseconds timeout) {
  changed_.wait_for(lock, timeout, [&] { return pending_ > 0 || closed_; });
}

}  // namespace xssguard
