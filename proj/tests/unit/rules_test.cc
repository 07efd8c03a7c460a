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

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "extraction_corpus.h"
#include "test_util.h"
#include "xssguard/link_extractor.h"

namespace xssguard {
namespace {

using testing::U;

RulePattern P(PatternKind kind, std::string_view value) {
  auto p = RulePattern::Make(kind, value);
  if (!p) throw std::invalid_argument(std::string(value));
  return *p;
}

TEST(RulePatternTest, Matching) {
  RulePattern exact = P(PatternKind::kExact, "http://evil1.com/a.jpg#frag");
  EXPECT_EQ(exact.value(), "http://evil1.com/a.jpg");
  EXPECT_TRUE(exact.Matches(U("http://EVIL1.com:80/a.jpg")));
  EXPECT_FALSE(exact.Matches(U("http://evil1.com/a.jpg?x")));

  RulePattern prefix = P(PatternKind::kPrefix, "http://evil1.com/img/");
  EXPECT_TRUE(prefix.Matches(U("http://evil1.com/img/a.jpg")));
  EXPECT_FALSE(prefix.Matches(U("http://evil1.com/other")));

  RulePattern domain = P(PatternKind::kDomain, ".Evil1.COM.");
  EXPECT_EQ(domain.value(), "evil1.com");
  EXPECT_TRUE(domain.Matches(U("http://evil1.com/")));
  EXPECT_TRUE(domain.Matches(U("https://a.b.evil1.com/x")));
  EXPECT_FALSE(domain.Matches(U("http://notevil1.com/")));

  EXPECT_FALSE(RulePattern::Make(PatternKind::kExact, "/relative"));
  EXPECT_FALSE(RulePattern::Make(PatternKind::kDomain, "a.com/x"));
  EXPECT_FALSE(RulePattern::Make(PatternKind::kPrefix, "   "));
}

TEST(RuleStoreTest, DropContextRemovesOnlyItsTemporaryRules) {
  RuleStore store;
  store.AddTemporary(P(PatternKind::kExact, "http://a.example/"),
                     RuleAction::kAllow, "ctx-1", RuleOrigin::kAutoExtracted);
  store.AddTemporary(P(PatternKind::kExact, "http://b.example/"),
                     RuleAction::kAllow, "ctx-1", RuleOrigin::kUserDecision);
  const std::string kept =
      store.AddTemporary(P(PatternKind::kExact, "http://a.example/"),
                         RuleAction::kAllow, "ctx-2",
                         RuleOrigin::kAutoExtracted).id;
  const std::string permanent =
      store.AddPermanent(P(PatternKind::kDomain, "a.example"),
                         RuleAction::kDeny, RuleOrigin::kUserDecision).id;
  EXPECT_EQ(store.DropContext("ctx-1"), 2u);
  EXPECT_TRUE(store.TemporaryRules("ctx-1").empty());
  EXPECT_NE(store.Find(kept), nullptr);
  EXPECT_NE(store.Find(permanent), nullptr);
  EXPECT_EQ(store.temporary_count(), 1u);
  EXPECT_EQ(store.permanent_count(), 1u);
  EXPECT_FALSE(store.HasAutoRule("ctx-1", U("http://a.example/")));
  EXPECT_TRUE(store.HasAutoRule("ctx-2", U("http://a.example/")));
}

TEST(RuleStoreTest, RemoveAndGeneration) {
  RuleStore store;
  uint64_t g0 = store.permanent_generation();
  std::string id = store.AddPermanent(P(PatternKind::kDomain, "x.example"),
                                      RuleAction::kAllow,
                                      RuleOrigin::kUserDecision).id;
  EXPECT_GT(store.permanent_generation(), g0);
  uint64_t g1 = store.permanent_generation();
  EXPECT_TRUE(store.Remove(id));
  EXPECT_FALSE(store.Remove(id));
  EXPECT_GT(store.permanent_generation(), g1);
}

TEST(RegisterTemporaryRulesTest, OneRulePerExternalLinkIdempotent) {
  LinkInventory inv = ExtractStaticLinks(testing::kMultiDomainPage,
                                         U("http://site.example/"));
  RuleStore store;
  EXPECT_EQ(RegisterTemporaryRules(inv, "ctx-1", store), 8u);
  EXPECT_EQ(store.TemporaryRules("ctx-1").size(), 8u);
  EXPECT_EQ(RegisterTemporaryRules(inv, "ctx-1", store), 8u);
  EXPECT_EQ(store.TemporaryRules("ctx-1").size(), 8u);
  for (const FilterRule* r : store.TemporaryRules("ctx-1")) {
    EXPECT_EQ(r->pattern.kind(), PatternKind::kExact);
    EXPECT_EQ(r->action, RuleAction::kAllow);
    EXPECT_EQ(r->origin, RuleOrigin::kAutoExtracted);
  }
  LinkInventory empty;
  empty.page_url = U("http://site.example/");
  EXPECT_EQ(RegisterTemporaryRules(empty, "ctx-2", store), 0u);
  EXPECT_TRUE(store.TemporaryRules("ctx-2").empty());
}

// Exhaustive enumeration over small stores: every assignment of six rule
// templates to {absent, temporary, permanent}, with creation times shuffled,
// against an independent precedence oracle.
TEST(MatchRuleTest, PrecedenceAgreesWithOracleOnAllSmallStores) {
  struct Template {
    PatternKind kind;
    std::string value;
    RuleAction action;
  };
  const std::vector<Template> templates = {
      {PatternKind::kExact, "http://evil1.com/a.jpg", RuleAction::kAllow},
      {PatternKind::kExact, "http://evil1.com/a.jpg", RuleAction::kDeny},
      {PatternKind::kPrefix, "http://evil1.com/", RuleAction::kAllow},
      {PatternKind::kPrefix, "http://evil1.com/a", RuleAction::kDeny},
      {PatternKind::kDomain, "evil1.com", RuleAction::kDeny},
      {PatternKind::kDomain, "evil1.com", RuleAction::kAllow},
  };
  const std::vector<AbsoluteUrl> urls = {
      U("http://evil1.com/a.jpg"), U("http://evil1.com/b.jpg"),
      U("http://cdn.evil1.com/a.jpg"), U("http://evil2.com/a.jpg")};
  const ContextId ctx = "ctx-1";
  const TimePoint t0 = Clock::now();

  auto oracle_matches = [](const Template& t, const AbsoluteUrl& url) {
    const std::string spec = url.spec();
    switch (t.kind) {
      case PatternKind::kExact:
        return spec == t.value;
      case PatternKind::kPrefix:
        return spec.compare(0, t.value.size(), t.value) == 0;
      case PatternKind::kDomain:
        return url.host == t.value ||
               (url.host.size() > t.value.size() &&
                url.host.ends_with("." + t.value));
    }
    return false;
  };
  auto specificity = [](PatternKind k) {
    return k == PatternKind::kExact ? 0 : k == PatternKind::kPrefix ? 1 : 2;
  };

  int total = 1;
  for (size_t i = 0; i < templates.size(); ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    RuleStore store;
    // (tier, specificity, created offset, insertion index) -> rule id
    std::vector<std::tuple<int, int, int, int, std::string, size_t>> placed;
    int c = code;
    for (size_t i = 0; i < templates.size(); ++i, c /= 3) {
      int lifetime = c % 3;
      if (lifetime == 0) continue;
      const Template& t = templates[i];
      // Creation order deliberately differs from insertion order.
      int offset = static_cast<int>((i * 7 + code) % 5);
      TimePoint created = t0 + std::chrono::seconds(offset);
      const FilterRule& r =
          lifetime == 1
              ? store.AddTemporary(P(t.kind, t.value), t.action, ctx,
                                   RuleOrigin::kUserDecision, created)
              : store.AddPermanent(P(t.kind, t.value), t.action,
                                   RuleOrigin::kUserDecision, created);
      placed.emplace_back(lifetime, specificity(t.kind), offset,
                          static_cast<int>(placed.size()), r.id, i);
    }
    for (const AbsoluteUrl& url : urls) {
      std::optional<std::string> expected;
      std::tuple<int, int, int, int> best{9, 9, 9, 9};
      for (const auto& [tier, spec, offset, order, id, index] : placed) {
        if (!oracle_matches(templates[index], url)) continue;
        std::tuple<int, int, int, int> key{tier, spec, offset, order};
        if (key < best) {
          best = key;
          expected = id;
        }
      }
      auto got = MatchRule(url, &ctx, store);
      ASSERT_EQ(got ? std::optional<std::string>(got->id) : std::nullopt,
                expected)
          << "store code " << code << " url " << url.spec();
    }
  }
}

TEST(MatchRuleTest, EmptyStoreAndForeignContext) {
  RuleStore store;
  ContextId ctx = "ctx-1";
  EXPECT_FALSE(MatchRule(U("http://a.example/"), &ctx, store));
  store.AddTemporary(P(PatternKind::kDomain, "a.example"), RuleAction::kAllow,
                     "ctx-2", RuleOrigin::kUserDecision);
  EXPECT_FALSE(MatchRule(U("http://a.example/"), &ctx, store));
  EXPECT_FALSE(MatchRule(U("http://a.example/"), nullptr, store));
}

TEST(Rfc3339Test, RoundTrip) {
  auto t = ParseRfc3339("2026-10-19T10:06:28Z");
  ASSERT_TRUE(t);
  EXPECT_EQ(FormatRfc3339(*t), "2026-10-19T10:06:28Z");
  EXPECT_TRUE(ParseRfc3339("2026-10-19T10:06:28.250+02:00"));
  EXPECT_FALSE(ParseRfc3339("yesterday"));
}

class RulesFileTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("xssguard_rules_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(RulesFileTest, MissingFileIsEmpty) {
  EXPECT_TRUE(ReadRulesFile(dir_ / "none.jsonl").empty());
}

TEST_F(RulesFileTest, RoundTrip) {
  RuleStore store;
  store.AddPermanent(P(PatternKind::kDomain, "evil1.com"), RuleAction::kDeny,
                     RuleOrigin::kUserDecision);
  store.AddPermanent(P(PatternKind::kExact, "http://cdn.example/x.js"),
                     RuleAction::kAllow, RuleOrigin::kUserDecision);
  store.AddPermanent(P(PatternKind::kPrefix, "http://a.example/img/"),
                     RuleAction::kAllow, RuleOrigin::kUserDecision);
  store.AddTemporary(P(PatternKind::kExact, "http://t.example/"),
                     RuleAction::kAllow, "ctx-1", RuleOrigin::kAutoExtracted);
  auto path = dir_ / "rules.jsonl";
  WriteRulesFileAtomically(path, store);
  EXPECT_FALSE(std::filesystem::exists(dir_ / "rules.jsonl.tmp"));

  auto records = ReadRulesFile(path);
  ASSERT_EQ(records.size(), 3u);
  RuleStore reloaded;
  for (const auto& r : records) {
    reloaded.AddPermanent(r.pattern, r.action, RuleOrigin::kUserDecision,
                          r.created_at);
  }
  EXPECT_EQ(SerializeRulesFile(reloaded), SerializeRulesFile(store));
  auto original = store.PermanentRules();
  auto again = reloaded.PermanentRules();
  for (size_t i = 0; i < original.size(); ++i) {
    EXPECT_EQ(again[i]->pattern, original[i]->pattern);
    EXPECT_EQ(again[i]->action, original[i]->action);
  }
}

TEST_F(RulesFileTest, LineFormat) {
  RuleStore store;
  store.AddPermanent(P(PatternKind::kDomain, "evil1.com"), RuleAction::kDeny,
                     RuleOrigin::kUserDecision,
                     *ParseRfc3339("2026-01-02T03:04:05Z"));
  EXPECT_EQ(SerializeRulesFile(store),
            R"({"pattern":{"kind":"domain","value":"evil1.com"},)"
            R"("action":"deny","created_at":"2026-01-02T03:04:05Z"})"
            "\n");
}

TEST_F(RulesFileTest, MalformedLineNamesTheLine) {
  auto path = dir_ / "bad.jsonl";
  std::ofstream(path)
      << R"({"pattern":{"kind":"domain","value":"a.com"},"action":"allow","created_at":"2026-01-02T03:04:05Z"})"
      << "\n\n{not json}\n";
  try {
    ReadRulesFile(path);
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace xssguard
