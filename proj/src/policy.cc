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

#include "xssguard/policy.h"

#include "xssguard/domain.h"

namespace xssguard {

namespace {

ProxyAction Make(ActionKind kind, ActionReason reason,
                 const PageContext* context) {
  ProxyAction action{kind, reason, std::nullopt};
  if (context != nullptr) action.context_id = context->id;
  return action;
}

ProxyAction FromPermanent(const FilterRule& rule, const PageContext* context) {
  return rule.action == RuleAction::kAllow
             ? Make(ActionKind::kForward, ActionReason::kPermanentAllow, context)
             : Make(ActionKind::kDeny, ActionReason::kPermanentDeny, context);
}

}  // namespace

size_t PageContext::MergeLinks(const LinkInventory& links) {
  size_t added = 0;
  for (const AbsoluteUrl& link : links.external_links) {
    if (inventory.Add(link) && inventory.ContainsExternal(link)) ++added;
  }
  for (const AbsoluteUrl& link : links.local_links) inventory.Add(link);
  inventory.frame_links.insert(links.frame_links.begin(),
                               links.frame_links.end());
  inventory.stats += links.stats;
  ledger.set_link_count(inventory.n());
  return added;
}

std::string_view ToToken(ActionKind kind) {
  switch (kind) {
    case ActionKind::kForward:
      return "forward";
    case ActionKind::kDeny:
      return "deny";
    case ActionKind::kPrompt:
      return "prompt";
  }
  return "";
}

std::string_view ToToken(ActionReason reason) {
  switch (reason) {
    case ActionReason::kNavigation:
      return "navigation";
    case ActionReason::kLocalLink:
      return "local-link";
    case ActionReason::kTemporaryRule:
      return "temporary-rule";
    case ActionReason::kPermanentAllow:
      return "permanent-allow";
    case ActionReason::kPermanentDeny:
      return "permanent-deny";
    case ActionReason::kLeakageThreshold:
      return "leakage-threshold";
    case ActionReason::kNoRule:
      return "no-rule";
  }
  return "";
}

ProxyAction Decide(const ProxyRequest& request, PageContext* context,
                   const RuleStore& store, const PolicyConfig& config) {
  if (!request.referrer) {
    return Make(ActionKind::kForward, ActionReason::kNavigation, context);
  }
  if (IsLocal(request.url, *request.referrer)) {
    return Make(ActionKind::kForward, ActionReason::kLocalLink, context);
  }

  const FilterRule* permanent =
      BestMatch(store.PermanentRules(), request.url);
  if (config.permanent_deny_overrides && permanent != nullptr &&
      permanent->action == RuleAction::kDeny) {
    return FromPermanent(*permanent, context);
  }

  if (context != nullptr) {
    if (const FilterRule* temporary =
            BestMatch(store.TemporaryRules(context->id), request.url)) {
      if (temporary->action == RuleAction::kDeny) {
        return Make(ActionKind::kDeny, ActionReason::kTemporaryRule, context);
      }
      if (context->inventory.ContainsExternal(request.url) &&
          context->ledger.RecordAndCheck(request.url, config.threshold) ==
              GateDecision::kDeny) {
        return Make(ActionKind::kDeny, ActionReason::kLeakageThreshold,
                    context);
      }
      return Make(ActionKind::kForward, ActionReason::kTemporaryRule, context);
    }
  }

  if (permanent != nullptr) return FromPermanent(*permanent, context);
  return Make(ActionKind::kPrompt, ActionReason::kNoRule, context);
}

}  // namespace xssguard
