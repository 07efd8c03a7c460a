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

#include "xssguard/gateway.h"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "xssguard/content_coding.h"
#include "xssguard/domain.h"
#include "xssguard/script_injector.h"
#include "xssguard/strings.h"

namespace xssguard {

namespace {

bool AcceptPrefersHtml(std::string_view accept) {
  std::string_view first = accept.substr(0, accept.find(','));
  first = first.substr(0, first.find(';'));
  first = TrimAsciiWhitespace(first);
  return EqualsIgnoreCase(first, "text/html") ||
         EqualsIgnoreCase(first, "application/xhtml+xml");
}

bool HasNoBody(const ProxyRequest& request, const HttpResponse& response) {
  return request.method == "HEAD" || response.status < 200 ||
         response.status == 204 || response.status == 304;
}

}  // namespace

Gateway::Gateway(GatewayConfig config)
    : config_(std::move(config)), alerts_(config_.alert_queue_capacity) {
  if (config_.rules_file) {
    for (const PermanentRuleRecord& record :
         ReadRulesFile(*config_.rules_file)) {
      rules_.AddPermanent(record.pattern, record.action,
                          RuleOrigin::kUserDecision, record.created_at);
    }
    persisted_generation_ = rules_.permanent_generation();
    spdlog::info("loaded {} permanent rules from {}", rules_.permanent_count(),
                 config_.rules_file->string());
  }
}

Gateway::~Gateway() { Shutdown(); }

bool Gateway::IsTopLevelNavigation(const ProxyRequest& request) const {
  if (!request.referrer) return true;
  if (!config_.navigation_heuristic || request.method != "GET") return false;
  auto accept = request.headers.Get("Accept");
  return accept && AcceptPrefersHtml(*accept);
}

ProxyAction Gateway::HandleRequest(const ProxyRequest& request) {
  std::unique_lock lock(mu_);
  ++stats_.requests;
  const bool navigation = IsTopLevelNavigation(request);
  PageContext* context = ContextForUrlLocked(request.referrer);
  PolicyConfig policy{ThresholdConfig{config_.threshold_bits},
                      config_.permanent_deny_overrides};
  ProxyAction action = Decide(request, context, rules_, policy);

  if (action.kind == ActionKind::kPrompt) {
    ++stats_.prompts;
    action = ResolvePromptLocked(lock, request, action);
  }
  if (action.kind == ActionKind::kForward && navigation) {
    action.context_id = EstablishLocked(request.url).id;
  }
  ++stats_.actions[std::string(ToToken(action.reason))];
  spdlog::debug("{} {} -> {} ({})", request.method, request.url.spec(),
                ToToken(action.kind), ToToken(action.reason));
  return action;
}

ProxyAction Gateway::ResolvePromptLocked(std::unique_lock<std::mutex>& lock,
                                         const ProxyRequest& request,
                                         const ProxyAction& prompt) {
  ProxyAction out = prompt;
  out.kind = ActionKind::kDeny;
  out.reason = ActionReason::kNoRule;
  if (shut_down_) return out;

  AlertTicket ticket = alerts_.Enqueue(request, prompt.context_id);
  spdlog::info("connection alert {}: {} (referrer {})", ticket.id,
               request.url.spec(),
               request.referrer ? request.referrer->spec() : "-");
  AlertTicket done =
      alerts_.AwaitDecision(lock, ticket.id, config_.alert_timeout);
  if (done.state != TicketState::kDecided) {
    spdlog::info("connection alert {} expired ({}), denying", done.id,
                 done.expiry_cause);
    return out;
  }
  const bool temporary = done.scope == DecisionScope::kTemporary;
  if (done.outcome() == RuleAction::kAllow) {
    out.kind = ActionKind::kForward;
    out.reason =
        temporary ? ActionReason::kTemporaryRule : ActionReason::kPermanentAllow;
  } else {
    out.reason =
        temporary ? ActionReason::kTemporaryRule : ActionReason::kPermanentDeny;
  }
  return out;
}

HttpResponse Gateway::ProcessResponse(const ProxyRequest& request,
                                      const ProxyAction& action,
                                      HttpResponse response) {
  if (action.kind != ActionKind::kForward || HasNoBody(request, response)) {
    return response;
  }
  const std::string media = MediaType(response.headers);
  const bool html = media == "text/html" || media == "application/xhtml+xml";
  const bool css = media == "text/css";
  if (!html && !css) return response;

  GatewayConfig config = this->config();
  if (response.body.size() > config.max_body_bytes) {
    spdlog::warn("{}: {} byte body exceeds max-body-bytes, not analyzed",
                 request.url.spec(), response.body.size());
    std::lock_guard lock(mu_);
    ++stats_.passthrough_oversized;
    return response;
  }
  std::string_view encoding =
      response.headers.Get("Content-Encoding").value_or("");
  std::optional<std::string> decoded =
      DecodeContent(response.body, encoding, config.max_body_bytes);
  if (!decoded) {
    spdlog::warn("{}: cannot decode Content-Encoding '{}', not analyzed",
                 request.url.spec(), encoding);
    std::lock_guard lock(mu_);
    ++stats_.passthrough_undecodable;
    return response;
  }

  if (css) {
    ExtractionStats css_stats;
    std::set<AbsoluteUrl> urls =
        ExtractCssUrls(*decoded, request.url, &css_stats);
    std::lock_guard lock(mu_);
    stats_.extraction += css_stats;
    PageContext* owner = ContextByIdLocked(action.context_id);
    if (owner == nullptr) return response;
    LinkInventory links;
    links.page_url = owner->page_url;
    for (const AbsoluteUrl& url : urls) links.Add(url);
    links.stats = css_stats;
    owner->MergeLinks(links);
    RegisterTemporaryRules(owner->inventory, owner->id, rules_);
    if (ContextForUrlLocked(request.url) == nullptr) {
      context_index_[request.url] = owner->id;
    }
    return response;
  }

  LinkInventory extracted = ExtractStaticLinks(*decoded, request.url);
  {
    std::lock_guard lock(mu_);
    PageContext& owner = HtmlOwnerLocked(request, action);
    owner.MergeLinks(extracted);
    size_t rules = RegisterTemporaryRules(owner.inventory, owner.id, rules_);
    stats_.extraction += extracted.stats;
    ++stats_.responses_rewritten;
    spdlog::debug("{}: {} external links ({} in context {}), {} rules",
                  request.url.spec(), extracted.n(), owner.inventory.n(),
                  owner.id, rules);
  }
  response.body = config.inject ? Inject(*decoded) : std::move(*decoded);
  response.headers.Remove("Content-Encoding");
  response.headers.Remove("Transfer-Encoding");
  response.headers.Set("Content-Length", std::to_string(response.body.size()));
  return response;
}

PageContext Gateway::EstablishPageContext(const ProxyRequest& request) {
  std::lock_guard lock(mu_);
  return EstablishLocked(request.url);
}

PageContext* Gateway::ContextForUrlLocked(
    const std::optional<AbsoluteUrl>& url) {
  if (!url) return nullptr;
  auto it = context_index_.find(*url);
  if (it == context_index_.end()) return nullptr;
  return ContextByIdLocked(it->second);
}

PageContext* Gateway::ContextByIdLocked(const std::optional<ContextId>& id) {
  if (!id) return nullptr;
  auto it = contexts_.find(*id);
  return it == contexts_.end() ? nullptr : &it->second;
}

PageContext& Gateway::EstablishLocked(const AbsoluteUrl& page_url) {
  if (auto it = context_index_.find(page_url); it != context_index_.end()) {
    ContextId previous = it->second;
    PageContext* old = ContextByIdLocked(previous);
    if (old != nullptr && old->page_url == page_url) {
      DropContextLocked(previous);
    } else {
      context_index_.erase(it);
    }
  }
  while (!contexts_.empty() && contexts_.size() >= config_.max_contexts) {
    auto oldest = std::min_element(
        contexts_.begin(), contexts_.end(), [](const auto& a, const auto& b) {
          return a.second.created_at < b.second.created_at;
        });
    DropContextLocked(ContextId(oldest->first));
  }

  PageContext context;
  context.id = "ctx-" + std::to_string(next_context_++);
  context.page_url = page_url;
  context.inventory.page_url = page_url;
  context.created_at = Clock::now();
  ContextId id = context.id;
  context_index_[page_url] = id;
  ++stats_.contexts_created;
  return contexts_.emplace(id, std::move(context)).first->second;
}

void Gateway::DropContextLocked(const ContextId& id) {
  rules_.DropContext(id);
  std::erase_if(context_index_,
                [&id](const auto& entry) { return entry.second == id; });
  contexts_.erase(id);
}

PageContext& Gateway::HtmlOwnerLocked(const ProxyRequest& request,
                                      const ProxyAction& action) {
  PageContext* context = ContextByIdLocked(action.context_id);
  if (context != nullptr && context->page_url == request.url) return *context;
  if (context != nullptr && IsLocal(request.url, context->page_url)) {
    context_index_[request.url] = context->id;
    return *context;
  }
  return EstablishLocked(request.url);
}

void Gateway::PersistRulesLocked() {
  if (!config_.rules_file ||
      rules_.permanent_generation() == persisted_generation_) {
    return;
  }
  try {
    WriteRulesFileAtomically(*config_.rules_file, rules_);
    persisted_generation_ = rules_.permanent_generation();
  } catch (const std::exception& e) {
    spdlog::error("writing rules file: {}", e.what());
  }
}

std::vector<AlertTicket> Gateway::PendingAlerts() const {
  std::lock_guard lock(mu_);
  return alerts_.Pending();
}

std::vector<AlertTicket> Gateway::WaitForPendingAlerts(
    std::chrono::milliseconds wait) {
  std::unique_lock lock(mu_);
  alerts_.WaitForPending(lock, wait);
  return alerts_.Pending();
}

std::optional<AlertTicket> Gateway::FindAlert(std::string_view id) const {
  std::lock_guard lock(mu_);
  return alerts_.Find(id);
}

AlertQueue::DecideResult Gateway::DecideAlert(
    std::string_view id, RuleAction action, DecisionScope scope,
    std::optional<DecisionPattern> pattern) {
  std::lock_guard lock(mu_);
  std::optional<AlertTicket> ticket = alerts_.Find(id);
  if (!ticket) return AlertQueue::DecideResult::kNotFound;
  if (ticket->state != TicketState::kPending) {
    return AlertQueue::DecideResult::kAlreadyResolved;
  }

  const AbsoluteUrl& url = ticket->request_url;
  PatternKind kind = pattern ? pattern->kind
                             : (scope == DecisionScope::kPermanent
                                    ? PatternKind::kDomain
                                    : PatternKind::kExact);
  std::string value;
  if (pattern && pattern->value) {
    value = *pattern->value;
  } else if (kind == PatternKind::kDomain) {
    value = RegistrableDomain(url.host).value();
  } else if (kind == PatternKind::kPrefix) {
    value = url.origin() + url.path;
  } else {
    value = url.spec();
  }
  RulePattern rule_pattern =
      RulePattern::Make(kind, value).value_or(RulePattern::Exact(url));

  if (scope == DecisionScope::kPermanent) {
    rules_.AddPermanent(rule_pattern, action, RuleOrigin::kUserDecision);
    PersistRulesLocked();
  } else if (ticket->context_id && contexts_.contains(*ticket->context_id)) {
    rules_.AddTemporary(rule_pattern, action, *ticket->context_id,
                        RuleOrigin::kUserDecision);
  }
  return alerts_.Decide(id, action, scope);
}

std::vector<FilterRule> Gateway::Rules() const {
  std::lock_guard lock(mu_);
  std::vector<FilterRule> out;
  for (const FilterRule* rule : rules_.AllRules()) out.push_back(*rule);
  return out;
}

std::optional<FilterRule> Gateway::FindRule(std::string_view id) const {
  std::lock_guard lock(mu_);
  const FilterRule* rule = rules_.Find(id);
  if (rule == nullptr) return std::nullopt;
  return *rule;
}

FilterRule Gateway::AddPermanentRule(RulePattern pattern, RuleAction action) {
  std::lock_guard lock(mu_);
  FilterRule rule = rules_.AddPermanent(std::move(pattern), action,
                                        RuleOrigin::kUserDecision);
  PersistRulesLocked();
  return rule;
}

std::optional<FilterRule> Gateway::AddTemporaryRule(const ContextId& context,
                                                    RulePattern pattern,
                                                    RuleAction action) {
  std::lock_guard lock(mu_);
  if (!contexts_.contains(context)) return std::nullopt;
  return rules_.AddTemporary(std::move(pattern), action, context,
                             RuleOrigin::kUserDecision);
}

bool Gateway::DeleteRule(std::string_view id) {
  std::lock_guard lock(mu_);
  if (!rules_.Remove(id)) return false;
  PersistRulesLocked();
  return true;
}

LedgerSnapshot Gateway::LedgerLocked(const PageContext& context) const {
  return LedgerSnapshot{.context_id = context.id,
                        .page_url = context.page_url,
                        .n = context.ledger.n(),
                        .r = context.ledger.r(),
                        .bits = context.ledger.bits(),
                        .threshold = config_.threshold_bits,
                        .created_at = context.created_at};
}

std::vector<LedgerSnapshot> Gateway::Ledgers() const {
  std::lock_guard lock(mu_);
  std::vector<LedgerSnapshot> out;
  for (const auto& [id, context] : contexts_) out.push_back(LedgerLocked(context));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.created_at < b.created_at ||
           (a.created_at == b.created_at && a.context_id < b.context_id);
  });
  return out;
}

std::optional<PageContext> Gateway::FindContext(const ContextId& id) const {
  std::lock_guard lock(mu_);
  auto it = contexts_.find(id);
  if (it == contexts_.end()) return std::nullopt;
  return it->second;
}

size_t Gateway::context_count() const {
  std::lock_guard lock(mu_);
  return contexts_.size();
}

bool Gateway::DropContext(const ContextId& id) {
  std::lock_guard lock(mu_);
  if (!contexts_.contains(id)) return false;
  DropContextLocked(id);
  return true;
}

GatewayConfig Gateway::config() const {
  std::lock_guard lock(mu_);
  return config_;
}

void Gateway::SetThresholdBits(uint64_t bits) {
  std::lock_guard lock(mu_);
  config_.threshold_bits = bits;
}

StateSnapshot Gateway::Snapshot() const {
  std::lock_guard lock(mu_);
  StateSnapshot snapshot;
  for (const FilterRule* rule : rules_.AllRules()) {
    snapshot.rules.push_back(*rule);
  }
  for (const auto& [id, context] : contexts_) {
    snapshot.contexts.push_back(context);
    snapshot.ledgers.push_back(LedgerLocked(context));
  }
  snapshot.alerts = alerts_.History();
  snapshot.stats = stats_;
  snapshot.config = config_;
  return snapshot;
}

void Gateway::Shutdown() {
  std::lock_guard lock(mu_);
  shut_down_ = true;
  alerts_.Close();
}

}  // namespace xssguard
