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

// The per-request decision pipeline.
//
//   1. No Referer: top-level navigation, forwarded.
//   2. Same registrable domain as the Referer: local link, forwarded.
//   3. A temporary rule of the referring page matches: a deny rule denies;
//      an allow rule for one of the page's static external links is metered
//      by the leakage ledger and forwarded or denied; any other allow rule
//      forwards.
//   4. A permanent rule matches: its action.
//   5. Otherwise the operator is asked.
//
// With `permanent_deny_overrides` a matching permanent deny rule is applied
// before step 3.

#ifndef XSSGUARD_POLICY_H_
#define XSSGUARD_POLICY_H_

#include <optional>
#include <string_view>

#include "xssguard/http_message.h"
#include "xssguard/leakage.h"
#include "xssguard/link_extractor.h"
#include "xssguard/rules.h"

namespace xssguard {

struct PageContext {
  ContextId id;
  AbsoluteUrl page_url;
  LinkInventory inventory;
  LeakageLedger ledger;
  TimePoint created_at;

  // Adds `links` to the inventory, keeping the ledger's n in step. Returns
  // the number of new external links.
  size_t MergeLinks(const LinkInventory& links);
};

enum class ActionKind { kForward, kDeny, kPrompt };

enum class ActionReason {
  kNavigation,
  kLocalLink,
  kTemporaryRule,
  kPermanentAllow,
  kPermanentDeny,
  kLeakageThreshold,
  kNoRule,
};

std::string_view ToToken(ActionKind kind);
// The value sent in X-Filter-Reason, e.g. "leakage-threshold".
std::string_view ToToken(ActionReason reason);

struct ProxyAction {
  ActionKind kind = ActionKind::kForward;
  ActionReason reason = ActionReason::kNavigation;
  // Page context the response to this request belongs to, if any.
  std::optional<ContextId> context_id;

  friend bool operator==(const ProxyAction&, const ProxyAction&) = default;
};

struct PolicyConfig {
  ThresholdConfig threshold;
  bool permanent_deny_overrides = false;
};

// Runs the pipeline for `request`. `context` is the referring page's
// context, or null when the Referer names no known page. Metering mutates
// context->ledger, so callers must hold the state guard.
ProxyAction Decide(const ProxyRequest& request, PageContext* context,
                   const RuleStore& store, const PolicyConfig& config);

}  // namespace xssguard

#endif  // XSSGUARD_POLICY_H_
