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

// Allow/deny filter rules.
//
// Temporary rules belong to one page context and disappear with it; most are
// derived automatically from the page's static external links. Permanent
// rules come from the operator and persist in the rules file.

#ifndef XSSGUARD_RULES_H_
#define XSSGUARD_RULES_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "xssguard/link_extractor.h"
#include "xssguard/url.h"

namespace xssguard {

using Clock = std::chrono::system_clock;
using TimePoint = Clock::time_point;
using ContextId = std::string;

// "2026-10-19T10:06:00Z" (UTC, whole seconds).
std::string FormatRfc3339(TimePoint t);
// Accepts fractional seconds and numeric offsets.
std::optional<TimePoint> ParseRfc3339(std::string_view text);

enum class PatternKind { kExact, kPrefix, kDomain };
enum class RuleAction { kAllow, kDeny };
enum class RuleOrigin { kAutoExtracted, kUserDecision };

std::string_view ToToken(PatternKind kind);
std::string_view ToToken(RuleAction action);
std::string_view ToToken(RuleOrigin origin);
std::optional<PatternKind> ParsePatternKind(std::string_view token);
std::optional<RuleAction> ParseRuleAction(std::string_view token);

class RulePattern {
 public:
  // Normalizes `value`: exact patterns must parse as an AbsoluteUrl and are
  // stored canonically; domain patterns are lowercased without surrounding
  // dots. Prefix patterns are compared against the canonical URL spec.
  static std::optional<RulePattern> Make(PatternKind kind,
                                         std::string_view value);
  static RulePattern Exact(const AbsoluteUrl& url);
  static RulePattern Domain(std::string_view registrable_domain);

  PatternKind kind() const { return kind_; }
  const std::string& value() const { return value_; }

  bool Matches(const AbsoluteUrl& url) const;

  friend bool operator==(const RulePattern&, const RulePattern&) = default;

 private:
  RulePattern(PatternKind kind, std::string value)
      : kind_(kind), value_(std::move(value)) {}

  PatternKind kind_;
  std::string value_;
};

struct FilterRule {
  std::string id;
  RulePattern pattern;
  RuleAction action = RuleAction::kAllow;
  // The owning page context for temporary rules; nullopt means permanent.
  std::optional<ContextId> owner;
  RuleOrigin origin = RuleOrigin::kAutoExtracted;
  TimePoint created_at;
  uint64_t sequence = 0;  // insertion order, breaks created_at ties

  bool is_temporary() const { return owner.has_value(); }
};

class RuleStore {
 public:
  const FilterRule& AddTemporary(RulePattern pattern, RuleAction action,
                                 const ContextId& owner, RuleOrigin origin,
                                 TimePoint created_at = Clock::now());
  const FilterRule& AddPermanent(RulePattern pattern, RuleAction action,
                                 RuleOrigin origin,
                                 TimePoint created_at = Clock::now());

  // Removes one rule by id; false if there is none.
  bool Remove(std::string_view id);
  // Removes every temporary rule owned by `owner`. Returns how many.
  size_t DropContext(const ContextId& owner);

  const FilterRule* Find(std::string_view id) const;
  bool HasAutoRule(const ContextId& owner, const AbsoluteUrl& url) const;

  std::vector<const FilterRule*> TemporaryRules(const ContextId& owner) const;
  std::vector<const FilterRule*> PermanentRules() const;
  std::vector<const FilterRule*> AllRules() const;
  size_t temporary_count() const;
  size_t permanent_count() const { return permanent_.size(); }

  // Bumped on every change to the permanent set; lets callers decide when
  // the rules file needs rewriting.
  uint64_t permanent_generation() const { return permanent_generation_; }

 private:
  struct ContextRules {
    std::vector<FilterRule> rules;
    std::set<AbsoluteUrl> auto_allowed;
  };

  FilterRule MakeRule(RulePattern pattern, RuleAction action,
                      std::optional<ContextId> owner, RuleOrigin origin,
                      TimePoint created_at);

  std::map<ContextId, ContextRules> temporary_;
  std::vector<FilterRule> permanent_;
  uint64_t next_sequence_ = 1;
  uint64_t permanent_generation_ = 0;
};

// Most specific matching rule in `rules`: exact beats prefix beats domain,
// then the earliest created (by created_at, then insertion order).
const FilterRule* BestMatch(const std::vector<const FilterRule*>& rules,
                            const AbsoluteUrl& url);

// Temporary rules of `context` take precedence over permanent rules; only if
// no temporary rule matches are permanent rules consulted.
std::optional<FilterRule> MatchRule(const AbsoluteUrl& url,
                                    const ContextId* context,
                                    const RuleStore& store);

// Adds one auto-extracted temporary exact-URL allow rule per external link
// of `inventory` that does not have one yet, so repeated registration is a
// no-op. Returns inventory.n(), the number of such rules the context holds
// for this inventory.
size_t RegisterTemporaryRules(const LinkInventory& inventory,
                              const ContextId& context, RuleStore& store);

// Rules file: one JSON object per line,
//   {"pattern":{"kind":"exact|prefix|domain","value":"..."},
//    "action":"allow|deny","created_at":"<RFC 3339>"}
struct PermanentRuleRecord {
  RulePattern pattern;
  RuleAction action;
  TimePoint created_at;
};

// Missing file reads as empty. Throws std::runtime_error naming the line on
// malformed content. Blank lines are ignored.
std::vector<PermanentRuleRecord> ReadRulesFile(
    const std::filesystem::path& path);
std::string SerializeRulesFile(const RuleStore& store);
// Writes to a sibling temporary file and renames it over `path`.
void WriteRulesFileAtomically(const std::filesystem::path& path,
                              const RuleStore& store);

}  // namespace xssguard

#endif  // XSSGUARD_RULES_H_
