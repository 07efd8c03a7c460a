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

#include "xssguard/rules.h"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <nlohmann/json.hpp>

#include "xssguard/strings.h"

namespace xssguard {

namespace {

int Specificity(PatternKind kind) {
  switch (kind) {
    case PatternKind::kExact:
      return 3;
    case PatternKind::kPrefix:
      return 2;
    case PatternKind::kDomain:
      return 1;
  }
  return 0;
}

bool ParseFixedInt(std::string_view s, size_t pos, size_t len, int* out) {
  if (pos + len > s.size()) return false;
  int value = 0;
  for (size_t i = pos; i < pos + len; ++i) {
    if (!IsAsciiDigit(s[i])) return false;
    value = value * 10 + (s[i] - '0');
  }
  *out = value;
  return true;
}

}  // namespace

std::string FormatRfc3339(TimePoint t) {
  std::time_t seconds = Clock::to_time_t(t);
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

std::optional<TimePoint> ParseRfc3339(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)
  std::tm tm{};
  int year, month, day, hour, minute, second;
  if (s.size() < 20 || !ParseFixedInt(s, 0, 4, &year) || s[4] != '-' ||
      !ParseFixedInt(s, 5, 2, &month) || s[7] != '-' ||
      !ParseFixedInt(s, 8, 2, &day) || (s[10] != 'T' && s[10] != 't') ||
      !ParseFixedInt(s, 11, 2, &hour) || s[13] != ':' ||
      !ParseFixedInt(s, 14, 2, &minute) || s[16] != ':' ||
      !ParseFixedInt(s, 17, 2, &second)) {
    return std::nullopt;
  }
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 ||
      minute > 59 || second > 60) {
    return std::nullopt;
  }
  size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    size_t digits = pos;
    while (pos < s.size() && IsAsciiDigit(s[pos])) ++pos;
    if (pos == digits) return std::nullopt;
  }
  int offset_seconds = 0;
  if (pos < s.size() && (s[pos] == 'Z' || s[pos] == 'z')) {
    ++pos;
  } else if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    int oh, om;
    if (!ParseFixedInt(s, pos + 1, 2, &oh) || pos + 3 >= s.size() ||
        s[pos + 3] != ':' || !ParseFixedInt(s, pos + 4, 2, &om)) {
      return std::nullopt;
    }
    offset_seconds = (oh * 3600 + om * 60) * (s[pos] == '-' ? -1 : 1);
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;
  tm.tm_year = year - 1900;
  tm.tm_mon = month - 1;
  tm.tm_mday = day;
  tm.tm_hour = hour;
  tm.tm_min = minute;
  tm.tm_sec = second;
  std::time_t utc = timegm(&tm);
  return Clock::from_time_t(utc - offset_seconds);
}

std::string_view ToToken(PatternKind kind) {
  switch (kind) {
    case PatternKind::kExact:
      return "exact";
    case PatternKind::kPrefix:
      return "prefix";
    case PatternKind::kDomain:
      return "domain";
  }
  return "";
}

std::string_view ToToken(RuleAction action) {
  return action == RuleAction::kAllow ? "allow" : "deny";
}

std::string_view ToToken(RuleOrigin origin) {
  return origin == RuleOrigin::kAutoExtracted ? "auto-extracted"
                                              : "user-decision";
}

std::optional<PatternKind> ParsePatternKind(std::string_view token) {
  if (token == "exact") return PatternKind::kExact;
  if (token == "prefix") return PatternKind::kPrefix;
  if (token == "domain") return PatternKind::kDomain;
  return std::nullopt;
}

std::optional<RuleAction> ParseRuleAction(std::string_view token) {
  if (token == "allow") return RuleAction::kAllow;
  if (token == "deny") return RuleAction::kDeny;
  return std::nullopt;
}

// RulePattern -----------------------------------------------------------------

std::optional<RulePattern> RulePattern::Make(PatternKind kind,
                                             std::string_view value) {
  switch (kind) {
    case PatternKind::kExact: {
      auto url = AbsoluteUrl::Parse(value);
      if (!url) return std::nullopt;
      return Exact(*url);
    }
    case PatternKind::kPrefix: {
      std::string_view trimmed = TrimAsciiWhitespace(value);
      if (trimmed.empty()) return std::nullopt;
      // Canonicalize the scheme and host when the prefix is a whole URL.
      if (auto url = AbsoluteUrl::Parse(trimmed);
          url && trimmed.find('/', trimmed.find("//") + 2) !=
                     std::string_view::npos) {
        return RulePattern(kind, url->spec());
      }
      return RulePattern(kind, std::string(trimmed));
    }
    case PatternKind::kDomain: {
      std::string domain = ToLowerAscii(TrimAsciiWhitespace(value));
      while (!domain.empty() && domain.front() == '.') domain.erase(0, 1);
      while (!domain.empty() && domain.back() == '.') domain.pop_back();
      if (domain.empty() || domain.find('/') != std::string::npos) {
        return std::nullopt;
      }
      return RulePattern(kind, std::move(domain));
    }
  }
  return std::nullopt;
}

RulePattern RulePattern::Exact(const AbsoluteUrl& url) {
  return RulePattern(PatternKind::kExact, url.spec());
}

RulePattern RulePattern::Domain(std::string_view registrable_domain) {
  return RulePattern(PatternKind::kDomain, ToLowerAscii(registrable_domain));
}

bool RulePattern::Matches(const AbsoluteUrl& url) const {
  switch (kind_) {
    case PatternKind::kExact:
      return url.spec() == value_;
    case PatternKind::kPrefix:
      return url.spec().starts_with(value_);
    case PatternKind::kDomain:
      return url.host == value_ ||
             (url.host.size() > value_.size() &&
              url.host.ends_with(value_) &&
              url.host[url.host.size() - value_.size() - 1] == '.');
  }
  return false;
}

// RuleStore -------------------------------------------------------------------

FilterRule RuleStore::MakeRule(RulePattern pattern, RuleAction action,
                               std::optional<ContextId> owner,
                               RuleOrigin origin, TimePoint created_at) {
  uint64_t sequence = next_sequence_++;
  return FilterRule{.id = "rule-" + std::to_string(sequence),
                    .pattern = std::move(pattern),
                    .action = action,
                    .owner = std::move(owner),
                    .origin = origin,
                    .created_at = created_at,
                    .sequence = sequence};
}

const FilterRule& RuleStore::AddTemporary(RulePattern pattern,
                                          RuleAction action,
                                          const ContextId& owner,
                                          RuleOrigin origin,
                                          TimePoint created_at) {
  ContextRules& bucket = temporary_[owner];
  if (origin == RuleOrigin::kAutoExtracted && action == RuleAction::kAllow &&
      pattern.kind() == PatternKind::kExact) {
    if (auto url = AbsoluteUrl::Parse(pattern.value())) {
      bucket.auto_allowed.insert(*url);
    }
  }
  bucket.rules.push_back(
      MakeRule(std::move(pattern), action, owner, origin, created_at));
  return bucket.rules.back();
}

const FilterRule& RuleStore::AddPermanent(RulePattern pattern,
                                          RuleAction action, RuleOrigin origin,
                                          TimePoint created_at) {
  permanent_.push_back(
      MakeRule(std::move(pattern), action, std::nullopt, origin, created_at));
  ++permanent_generation_;
  return permanent_.back();
}

bool RuleStore::Remove(std::string_view id) {
  auto by_id = [id](const FilterRule& rule) { return rule.id == id; };
  if (auto it = std::find_if(permanent_.begin(), permanent_.end(), by_id);
      it != permanent_.end()) {
    permanent_.erase(it);
    ++permanent_generation_;
    return true;
  }
  for (auto& [owner, bucket] : temporary_) {
    auto it = std::find_if(bucket.rules.begin(), bucket.rules.end(), by_id);
    if (it == bucket.rules.end()) continue;
    if (it->origin == RuleOrigin::kAutoExtracted &&
        it->pattern.kind() == PatternKind::kExact) {
      if (auto url = AbsoluteUrl::Parse(it->pattern.value())) {
        bucket.auto_allowed.erase(*url);
      }
    }
    bucket.rules.erase(it);
    return true;
  }
  return false;
}

size_t RuleStore::DropContext(const ContextId& owner) {
  auto it = temporary_.find(owner);
  if (it == temporary_.end()) return 0;
  size_t dropped = it->second.rules.size();
  temporary_.erase(it);
  return dropped;
}

const FilterRule* RuleStore::Find(std::string_view id) const {
  for (const FilterRule& rule : permanent_) {
    if (rule.id == id) return &rule;
  }
  for (const auto& [owner, bucket] : temporary_) {
    for (const FilterRule& rule : bucket.rules) {
      if (rule.id == id) return &rule;
    }
  }
  return nullptr;
}

bool RuleStore::HasAutoRule(const ContextId& owner,
                            const AbsoluteUrl& url) const {
  auto it = temporary_.find(owner);
  return it != temporary_.end() && it->second.auto_allowed.contains(url);
}

std::vector<const FilterRule*> RuleStore::TemporaryRules(
    const ContextId& owner) const {
  std::vector<const FilterRule*> out;
  if (auto it = temporary_.find(owner); it != temporary_.end()) {
    for (const FilterRule& rule : it->second.rules) out.push_back(&rule);
  }
  return out;
}

std::vector<const FilterRule*> RuleStore::PermanentRules() const {
  std::vector<const FilterRule*> out;
  for (const FilterRule& rule : permanent_) out.push_back(&rule);
  return out;
}

std::vector<const FilterRule*> RuleStore::AllRules() const {
  std::vector<const FilterRule*> out = PermanentRules();
  for (const auto& [owner, bucket] : temporary_) {
    for (const FilterRule& rule : bucket.rules) out.push_back(&rule);
  }
  std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) {
    return a->sequence < b->sequence;
  });
  return out;
}

size_t RuleStore::temporary_count() const {
  size_t count = 0;
  for (const auto& [owner, bucket] : temporary_) count += bucket.rules.size();
  return count;
}

// Matching --------------------------------------------------------------------

const FilterRule* BestMatch(const std::vector<const FilterRule*>& rules,
                            const AbsoluteUrl& url) {
  const FilterRule* best = nullptr;
  auto rank = [](const FilterRule* rule) {
    // Higher specificity first, then earlier creation.
    return std::make_tuple(-Specificity(rule->pattern.kind()),
                           rule->created_at, rule->sequence);
  };
  for (const FilterRule* rule : rules) {
    if (!rule->pattern.Matches(url)) continue;
    if (best == nullptr || rank(rule) < rank(best)) best = rule;
  }
  return best;
}

std::optional<FilterRule> MatchRule(const AbsoluteUrl& url,
                                    const ContextId* context,
                                    const RuleStore& store) {
  if (context != nullptr) {
    if (const FilterRule* rule = BestMatch(store.TemporaryRules(*context), url)) {
      return *rule;
    }
  }
  if (const FilterRule* rule = BestMatch(store.PermanentRules(), url)) {
    return *rule;
  }
  return std::nullopt;
}

size_t RegisterTemporaryRules(const LinkInventory& inventory,
                              const ContextId& context, RuleStore& store) {
  for (const AbsoluteUrl& link : inventory.external_links) {
    if (store.HasAutoRule(context, link)) continue;
    store.AddTemporary(RulePattern::Exact(link), RuleAction::kAllow, context,
                       RuleOrigin::kAutoExtracted);
  }
  return inventory.n();
}

// Rules file ------------------------------------------------------------------

std::vector<PermanentRuleRecord> ReadRulesFile(
    const std::filesystem::path& path) {
  std::vector<PermanentRuleRecord> records;
  std::ifstream in(path);
  if (!in) {
    if (!std::filesystem::exists(path)) return records;
    throw std::runtime_error("cannot open rules file " + path.string());
  }
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (TrimAsciiWhitespace(line).empty()) continue;
    auto fail = [&](std::string_view what) {
      return std::runtime_error(path.string() + ":" +
                                std::to_string(line_number) + ": " +
                                std::string(what));
    };
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw fail("not a JSON object");
    try {
      const auto& pattern = j.at("pattern");
      auto kind = ParsePatternKind(pattern.at("kind").get<std::string>());
      if (!kind) throw fail("unknown pattern kind");
      auto parsed =
          RulePattern::Make(*kind, pattern.at("value").get<std::string>());
      if (!parsed) throw fail("invalid pattern value");
      auto action = ParseRuleAction(j.at("action").get<std::string>());
      if (!action) throw fail("unknown action");
      auto created = ParseRfc3339(j.at("created_at").get<std::string>());
      if (!created) throw fail("created_at is not RFC 3339");
      records.push_back({*parsed, *action, *created});
    } catch (const nlohmann::json::exception& e) {
      throw fail(e.what());
    }
  }
  return records;
}

std::string SerializeRulesFile(const RuleStore& store) {
  std::string out;
  for (const FilterRule* rule : store.PermanentRules()) {
    nlohmann::ordered_json j;
    j["pattern"] = {{"kind", ToToken(rule->pattern.kind())},
                    {"value", rule->pattern.value()}};
    j["action"] = ToToken(rule->action);
    j["created_at"] = FormatRfc3339(rule->created_at);
    out += j.dump();
    out += '\n';
  }
  return out;
}

void WriteRulesFileAtomically(const std::filesystem::path& path,
                              const RuleStore& store) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << SerializeRulesFile(store);
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace xssguard
