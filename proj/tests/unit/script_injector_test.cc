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

#include "xssguard/script_injector.h"

#include <random>

#include <gtest/gtest.h>

#include "injection_corpus.h"
#include "test_util.h"

namespace xssguard {
namespace {

size_t CountOccurrences(std::string_view haystack, std::string_view needle) {
  size_t count = 0;
  for (size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + 1)) {
    ++count;
  }
  return count;
}

class InjectionCorpusTest
    : public ::testing::TestWithParam<testing::InjectionCase> {};

TEST_P(InjectionCorpusTest, PayloadOnceRightAfterHeadOpen) {
  const testing::InjectionCase& c = GetParam();
  const std::string& element = BuildPayload().element;
  std::string out = Inject(c.document);
  size_t head = c.document.find(c.head_open);
  ASSERT_NE(head, std::string::npos);
  size_t after = head + c.head_open.size();
  EXPECT_EQ(out.substr(after, element.size()), element);
  EXPECT_EQ(CountOccurrences(out, element), 1u);
  EXPECT_EQ(CountOccurrences(out, BuildPayload().marker), 1u);
}

TEST_P(InjectionCorpusTest, PreservesEveryOriginalByte) {
  const testing::InjectionCase& c = GetParam();
  const std::string& element = BuildPayload().element;
  std::string out = Inject(c.document);
  EXPECT_EQ(out.size(), c.document.size() + element.size());
  size_t at = out.find(element);
  ASSERT_NE(at, std::string::npos);
  EXPECT_EQ(out.substr(0, at) + out.substr(at + element.size()), c.document);
}

TEST_P(InjectionCorpusTest, Idempotent) {
  const testing::InjectionCase& c = GetParam();
  std::string once = Inject(c.document);
  EXPECT_EQ(Inject(once), once);
}

INSTANTIATE_TEST_SUITE_P(
    Golden, InjectionCorpusTest,
    ::testing::ValuesIn(testing::InjectionCorpus()),
    [](const ::testing::TestParamInfo<testing::InjectionCase>& info) {
      return info.param.name;
    });

TEST(InjectTest, CorpusHasTwentyDocuments) {
  EXPECT_EQ(testing::InjectionCorpus().size(), 20u);
}

TEST(InjectTest, PayloadShape) {
  const InjectionPayload& p = BuildPayload();
  EXPECT_EQ(p.marker, "data-xssguard-control");
  EXPECT_TRUE(p.element.starts_with("<script"));
  EXPECT_TRUE(p.element.ends_with("</script>"));
  EXPECT_NE(p.element.find(p.source), std::string::npos);
  EXPECT_NE(p.source.find("window"), std::string::npos);
  EXPECT_NE(p.source.find("loadFrames"), std::string::npos);
  // The payload must not end its own script element early.
  EXPECT_EQ(CountOccurrences(p.element, "</script"), 1u);
}

TEST(InjectTest, ScriptBeforeHeadStillRunsFirst) {
  std::string doc = "<script>steal(window.name)</script><html><head></head>";
  std::string out = Inject(doc);
  EXPECT_EQ(out, BuildPayload().element + doc);
  EXPECT_EQ(Inject(out), out);
}

TEST(InjectTest, NoHeadGoesBeforeBody) {
  std::string doc = "<html><body><p>x</p></body></html>";
  std::string out = Inject(doc);
  EXPECT_EQ(out, "<html>" + BuildPayload().element + "<body><p>x</p></body></html>");
  EXPECT_EQ(Inject(out), out);
}

TEST(InjectTest, NeitherHeadNorBodyPrepends) {
  EXPECT_EQ(Inject("<p>fragment</p>"), BuildPayload().element + "<p>fragment</p>");
  EXPECT_EQ(Inject(""), BuildPayload().element);
}

TEST(InjectTest, MarkerPlantedElsewhereDoesNotSuppressInjection) {
  std::string doc = "<html><head></head><body><p>" + BuildPayload().element +
                    "</p></body></html>";
  std::string out = Inject(doc);
  EXPECT_EQ(out.size(), doc.size() + BuildPayload().element.size());
  EXPECT_EQ(out.find(BuildPayload().element), std::string("<html><head>").size());
}

TEST(InjectTest, HeadInsideScriptOrCommentIgnored) {
  std::string doc =
      "<!-- <head> --><html><head id=real></head></html>";
  std::string out = Inject(doc);
  EXPECT_EQ(out.find(BuildPayload().element),
            doc.find("<head id=real>") + std::string("<head id=real>").size());
}

// Random tag soup: byte preservation and idempotence hold everywhere.
TEST(InjectTest, GeneratedDocumentsPreserveBytesAndAreIdempotent) {
  std::mt19937_64 rng(testing::TestSeed());
  const std::vector<std::string> parts = {
      "<html>", "<head>", "</head>", "<body>", "<script>x()</script>",
      "<!-- c -->", "<p>t</p>", "<HEAD class=y>", "<title>a</title>", "text",
      "<style>p{}</style>", "<", ">", "\n"};
  const std::string& element = BuildPayload().element;
  for (int i = 0; i < 500; ++i) {
    std::string doc;
    for (int k = static_cast<int>(rng() % 10); k > 0; --k) {
      doc += parts[rng() % parts.size()];
    }
    std::string out = Inject(doc);
    ASSERT_EQ(out.size(), doc.size() + element.size()) << doc;
    size_t offset = InjectionOffset(doc);
    ASSERT_EQ(out.substr(0, offset), doc.substr(0, offset));
    ASSERT_EQ(out.substr(offset, element.size()), element);
    ASSERT_EQ(out.substr(offset + element.size()), doc.substr(offset));
    ASSERT_EQ(Inject(out), out) << doc;
  }
}

}  // namespace
}  // namespace xssguard
