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

#include "xssguard/domain.h"

#include <string>
#include <unordered_set>

#include "embedded.h"
#include "xssguard/strings.h"

namespace xssguard {

namespace {

struct SuffixTable {
  std::unordered_set<std::string> suffixes;
  std::string version;
};

const SuffixTable& Table() {
  static const SuffixTable* table = [] {
    auto* t = new SuffixTable;
    std::string_view data = embedded::PublicSuffixes();
    while (!data.empty()) {
      size_t eol = data.find('\n');
      std::string_view line = TrimAsciiWhitespace(data.substr(0, eol));
      data.remove_prefix(eol == std::string_view::npos ? data.size() : eol + 1);
      if (line.starts_with("//")) {
        constexpr std::string_view kVersionTag = "// version:";
        if (line.starts_with(kVersionTag)) {
          t->version = std::string(
              TrimAsciiWhitespace(line.substr(kVersionTag.size())));
        }
        continue;
      }
      if (!line.empty()) t->suffixes.insert(ToLowerAscii(line));
    }
    return t;
  }();
  return *table;
}

bool IsDottedQuad(std::string_view host) {
  int labels = 0;
  size_t pos = 0;
  while (pos <= host.size()) {
    size_t end = host.find('.', pos);
    if (end == std::string_view::npos) end = host.size();
    std::string_view label = host.substr(pos, end - pos);
    if (label.empty() || label.size() > 3) return false;
    for (char c : label) {
      if (!IsAsciiDigit(c)) return false;
    }
    ++labels;
    pos = end + 1;
  }
  return labels == 4;
}

}  // namespace

bool IsIpLiteral(std::string_view host) {
  if (host.find(':') != std::string_view::npos) return true;
  if (!host.empty() && host.front() == '[') return true;
  return IsDottedQuad(host);
}

DomainKey RegistrableDomain(std::string_view host) {
  std::string h = ToLowerAscii(host);
  while (!h.empty() && h.back() == '.') h.pop_back();
  if (h.empty() || IsIpLiteral(h) || h.find('.') == std::string::npos) {
    return DomainKey(std::move(h));
  }

  const auto& suffixes = Table().suffixes;
  // Walk candidate suffixes from longest to shortest; the first listed one
  // decides how many labels make up the public suffix.
  size_t previous_dot = std::string::npos;
  size_t dot = h.find('.');
  while (dot != std::string::npos) {
    std::string_view candidate = std::string_view(h).substr(dot + 1);
    if (suffixes.contains(std::string(candidate))) {
      size_t start = previous_dot == std::string::npos ? 0 : previous_dot + 1;
      return DomainKey(h.substr(start));
    }
    previous_dot = dot;
    dot = h.find('.', dot + 1);
  }
  if (suffixes.contains(h)) return DomainKey(std::move(h));

  // Default rule: the TLD is the public suffix.
  size_t last = h.rfind('.');
  size_t second = h.rfind('.', last - 1);
  return DomainKey(second == std::string::npos ? h : h.substr(second + 1));
}

bool IsLocal(const AbsoluteUrl& request_url, const AbsoluteUrl& referrer) {
  return RegistrableDomain(request_url.host) ==
         RegistrableDomain(referrer.host);
}

std::string_view PublicSuffixTableVersion() { return Table().version; }

}  // namespace xssguard
