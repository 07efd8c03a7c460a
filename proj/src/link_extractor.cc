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

#include "xssguard/link_extractor.h"

#include <charconv>
#include <optional>
#include <string>

#include "xssguard/domain.h"
#include "xssguard/html_scanner.h"
#include "xssguard/strings.h"

namespace xssguard {

namespace {

bool IsCssNameChar(char c) {
  return IsAsciiAlpha(c) || IsAsciiDigit(c) || c == '-' || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

// Index just past the string starting at `pos` (which holds the quote), or
// npos if the string is not terminated.
size_t SkipCssString(std::string_view css, size_t pos) {
  char quote = css[pos];
  for (size_t i = pos + 1; i < css.size(); ++i) {
    if (css[i] == '\\') {
      ++i;
    } else if (css[i] == quote) {
      return i + 1;
    } else if (css[i] == '\n') {
      return std::string_view::npos;
    }
  }
  return std::string_view::npos;
}

std::string UnescapeCss(std::string_view s) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 >= s.size()) {
      out += s[i];
      continue;
    }
    size_t hex_end = i + 1;
    while (hex_end < s.size() && hex_end - i <= 6 &&
           IsAsciiHexDigit(s[hex_end])) {
      ++hex_end;
    }
    if (hex_end == i + 1) {
      out += s[++i];
      continue;
    }
    uint32_t cp = 0;
    std::from_chars(s.data() + i + 1, s.data() + hex_end, cp, 16);
    if (cp < 0x80 && cp > 0) {
      out += static_cast<char>(cp);
    } else {
      // Non-ASCII escapes cannot occur in a well-formed URL; keep them
      // escaped so resolution percent-encodes the backslash.
      out += s.substr(i, hex_end - i);
    }
    i = hex_end - 1;
    if (i + 1 < s.size() && IsAsciiWhitespace(s[i + 1])) ++i;
  }
  return out;
}

// Parses the operand of a url( token whose '(' is at `open`. Sets `*next` to
// the index after the token and returns the raw operand, or nullopt when the
// token is malformed.
std::optional<std::string> ParseUrlToken(std::string_view css, size_t open,
                                         size_t* next) {
  size_t pos = open + 1;
  while (pos < css.size() && IsAsciiWhitespace(css[pos])) ++pos;
  if (pos >= css.size()) {
    *next = css.size();
    return std::nullopt;
  }
  std::string operand;
  if (css[pos] == '"' || css[pos] == '\'') {
    size_t end = SkipCssString(css, pos);
    if (end == std::string_view::npos) {
      size_t eol = css.find('\n', pos);
      *next = eol == std::string_view::npos ? css.size() : eol;
      return std::nullopt;
    }
    operand = UnescapeCss(css.substr(pos + 1, end - pos - 2));
    pos = end;
    while (pos < css.size() && IsAsciiWhitespace(css[pos])) ++pos;
    if (pos >= css.size() || css[pos] != ')') {
      size_t close = css.find(')', pos);
      *next = close == std::string_view::npos ? css.size() : close + 1;
      return std::nullopt;
    }
    *next = pos + 1;
  } else {
    size_t close = css.find(')', pos);
    if (close == std::string_view::npos) {
      *next = css.size();
      return std::nullopt;
    }
    *next = close + 1;
    std::string_view raw = TrimAsciiWhitespace(css.substr(pos, close - pos));
    for (size_t i = 0; i < raw.size(); ++i) {
      char c = raw[i];
      if (c == '\\') {
        // An escape may end in one whitespace character; skip it whole.
        size_t j = i + 1;
        while (j < raw.size() && j - i <= 6 && IsAsciiHexDigit(raw[j])) ++j;
        if (j == i + 1) {
          i = j;
        } else {
          i = j < raw.size() && IsAsciiWhitespace(raw[j]) ? j : j - 1;
        }
        continue;
      }
      if (IsAsciiWhitespace(c) || c == '"' || c == '\'' || c == '(') {
        return std::nullopt;
      }
    }
    operand = UnescapeCss(raw);
  }
  if (TrimAsciiWhitespace(operand).empty()) return std::nullopt;
  return operand;
}

void CollectCssUrls(std::string_view css, const AbsoluteUrl& base,
                    ExtractionStats& stats,
                    const std::function<void(const AbsoluteUrl&)>& sink) {
  auto consider = [&](const std::optional<std::string>& operand) {
    ++stats.link_attributes;
    if (!operand) {
      ++stats.unparseable;
    } else if (IsScriptBearingReference(*operand)) {
      ++stats.script_bearing;
    } else if (auto url = ResolveLink(base, *operand)) {
      sink(*url);
    } else {
      ++stats.unparseable;
    }
  };
  size_t pos = 0;
  while (pos < css.size()) {
    char c = css[pos];
    if (c == '/' && pos + 1 < css.size() && css[pos + 1] == '*') {
      size_t end = css.find("*/", pos + 2);
      pos = end == std::string_view::npos ? css.size() : end + 2;
      continue;
    }
    if (c == '"' || c == '\'') {
      size_t end = SkipCssString(css, pos);
      pos = end == std::string_view::npos ? pos + 1 : end;
      continue;
    }
    if ((c == 'u' || c == 'U') && StartsWithIgnoreCase(css.substr(pos), "url(") &&
        (pos == 0 || !IsCssNameChar(css[pos - 1]))) {
      size_t next = pos + 4;
      consider(ParseUrlToken(css, pos + 3, &next));
      pos = next;
      continue;
    }
    ++pos;
  }
}

}  // namespace

ExtractionStats& ExtractionStats::operator+=(const ExtractionStats& other) {
  documents += other.documents;
  stylesheets += other.stylesheets;
  link_attributes += other.link_attributes;
  unparseable += other.unparseable;
  script_bearing += other.script_bearing;
  frames += other.frames;
  return *this;
}

bool LinkInventory::Add(const AbsoluteUrl& link) {
  if (IsLocal(link, page_url)) return local_links.insert(link).second;
  return external_links.insert(link).second;
}

LinkInventory ExtractStaticLinks(std::string_view document,
                                 const AbsoluteUrl& base) {
  LinkInventory inventory;
  inventory.page_url = base;
  ExtractionStats& stats = inventory.stats;
  stats.documents = 1;

  AbsoluteUrl resolution_base = base;
  bool base_seen = false;
  auto add_css = [&](std::string_view css) {
    CollectCssUrls(css, resolution_base, stats,
                   [&](const AbsoluteUrl& url) { inventory.Add(url); });
  };

  ScanStartTags(document, [&](const HtmlStartTag& tag) {
    const bool is_frame = tag.name == "frame" || tag.name == "iframe";
    for (std::string_view name : {"href", "src"}) {
      const HtmlAttribute* attr = tag.Find(name);
      if (attr == nullptr || !attr->has_value) continue;
      ++stats.link_attributes;
      if (attr->unterminated) {
        ++stats.unparseable;
        continue;
      }
      if (IsScriptBearingReference(attr->value)) {
        ++stats.script_bearing;
        continue;
      }
      std::optional<AbsoluteUrl> url = ResolveLink(resolution_base, attr->value);
      if (!url) {
        ++stats.unparseable;
        continue;
      }
      inventory.Add(*url);
      if (tag.name == "base" && name == "href" && !base_seen) {
        resolution_base = *url;
        base_seen = true;
      }
      if (is_frame && name == "src" && inventory.frame_links.insert(*url).second) {
        ++stats.frames;
      }
    }
    if (const HtmlAttribute* style = tag.Find("style");
        style != nullptr && style->has_value) {
      add_css(style->value);
    }
    if (tag.name == "style") add_css(tag.raw_text);
    return true;
  });
  return inventory;
}

std::set<AbsoluteUrl> ExtractCssUrls(std::string_view css,
                                     const AbsoluteUrl& base,
                                     ExtractionStats* stats) {
  ExtractionStats local;
  std::set<AbsoluteUrl> urls;
  CollectCssUrls(css, base, local,
                 [&](const AbsoluteUrl& url) { urls.insert(url); });
  local.stylesheets = 1;
  if (stats != nullptr) *stats += local;
  return urls;
}

}  // namespace xssguard
