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

#include "xssguard/html_scanner.h"

#include <array>
#include <charconv>

#include "xssguard/strings.h"

namespace xssguard {

namespace {

// Elements whose content the tokenizer treats as text. noscript is included
// because a scripting browser never fetches what it contains.
constexpr std::array<std::string_view, 9> kRawTextElements = {
    "script",  "style",   "textarea", "title",    "xmp",
    "iframe",  "noembed", "noframes", "noscript"};

bool IsRawText(std::string_view name) {
  for (std::string_view raw : kRawTextElements) {
    if (raw == name) return true;
  }
  return false;
}

bool IsNameTerminator(char c) {
  return IsAsciiWhitespace(c) || c == '/' || c == '>';
}

void AppendUtf8(uint32_t cp, std::string* out) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    *out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    *out += static_cast<char>(0xC0 | (cp >> 6));
    *out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    *out += static_cast<char>(0xE0 | (cp >> 12));
    *out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    *out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    *out += static_cast<char>(0xF0 | (cp >> 18));
    *out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    *out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    *out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Parses attributes starting at `pos` (just past the tag name) up to and
// including the closing '>'. Returns the offset one past the tag.
size_t ParseAttributes(std::string_view doc, size_t pos,
                       std::vector<HtmlAttribute>* attributes) {
  const size_t n = doc.size();
  while (true) {
    while (pos < n && (IsAsciiWhitespace(doc[pos]) || doc[pos] == '/')) ++pos;
    if (pos >= n) return n;
    if (doc[pos] == '>') return pos + 1;

    HtmlAttribute attr;
    size_t name_begin = pos;
    ++pos;  // a leading '=' belongs to the name
    while (pos < n && !IsNameTerminator(doc[pos]) && doc[pos] != '=') ++pos;
    attr.name = ToLowerAscii(doc.substr(name_begin, pos - name_begin));

    size_t look = pos;
    while (look < n && IsAsciiWhitespace(doc[look])) ++look;
    if (look < n && doc[look] == '=') {
      pos = look + 1;
      while (pos < n && IsAsciiWhitespace(doc[pos])) ++pos;
      attr.has_value = true;
      if (pos < n && (doc[pos] == '"' || doc[pos] == '\'')) {
        char quote = doc[pos];
        size_t close = doc.find(quote, pos + 1);
        if (close == std::string_view::npos) {
          attr.value = DecodeCharacterReferences(doc.substr(pos + 1));
          attr.unterminated = true;
          pos = n;
        } else {
          attr.value =
              DecodeCharacterReferences(doc.substr(pos + 1, close - pos - 1));
          pos = close + 1;
        }
      } else {
        size_t begin = pos;
        while (pos < n && !IsAsciiWhitespace(doc[pos]) && doc[pos] != '>') {
          ++pos;
        }
        attr.value = DecodeCharacterReferences(doc.substr(begin, pos - begin));
      }
    }
    attributes->push_back(std::move(attr));
  }
}

}  // namespace

const HtmlAttribute* HtmlStartTag::Find(std::string_view attribute_name) const {
  for (const HtmlAttribute& attr : attributes) {
    if (attr.name == attribute_name) return &attr;
  }
  return nullptr;
}

void ScanStartTags(std::string_view doc,
                   const std::function<bool(const HtmlStartTag&)>& visit) {
  const size_t n = doc.size();
  size_t pos = 0;
  while (pos < n) {
    size_t lt = doc.find('<', pos);
    if (lt == std::string_view::npos || lt + 1 >= n) return;
    char next = doc[lt + 1];

    if (doc.substr(lt, 4) == "<!--") {
      // "<!-->" and "<!--->" are complete (empty) comments.
      size_t close = doc.find("-->", lt + 2);
      pos = close == std::string_view::npos ? n : close + 3;
      continue;
    }
    if (next == '!' || next == '?' || next == '/') {
      size_t gt = doc.find('>', lt + 1);
      pos = gt == std::string_view::npos ? n : gt + 1;
      continue;
    }
    if (!IsAsciiAlpha(next)) {
      pos = lt + 1;
      continue;
    }

    HtmlStartTag tag;
    tag.begin = lt;
    size_t name_end = lt + 1;
    while (name_end < n && !IsNameTerminator(doc[name_end])) ++name_end;
    tag.name = ToLowerAscii(doc.substr(lt + 1, name_end - lt - 1));
    tag.end = ParseAttributes(doc, name_end, &tag.attributes);
    pos = tag.end;

    if (tag.name == "plaintext") {
      tag.raw_text = doc.substr(pos);
      pos = n;
    } else if (IsRawText(tag.name)) {
      size_t close = FindIgnoreCase(doc, "</" + tag.name, pos);
      // "</scriptx" does not close <script>.
      while (close != std::string_view::npos) {
        size_t after = close + 2 + tag.name.size();
        if (after >= n || IsNameTerminator(doc[after])) break;
        close = FindIgnoreCase(doc, "</" + tag.name, close + 1);
      }
      size_t text_end = close == std::string_view::npos ? n : close;
      tag.raw_text = doc.substr(pos, text_end - pos);
      pos = text_end;
    }
    if (!visit(tag)) return;
  }
}

std::string DecodeCharacterReferences(std::string_view text) {
  if (text.find('&') == std::string_view::npos) return std::string(text);
  struct Named {
    std::string_view name;
    uint32_t code_point;
  };
  static constexpr std::array<Named, 6> kNamed = {{{"amp", '&'},
                                                   {"lt", '<'},
                                                   {"gt", '>'},
                                                   {"quot", '"'},
                                                   {"apos", '\''},
                                                   {"nbsp", 0xA0}}};
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out += text[i++];
      continue;
    }
    size_t semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out += text[i++];
      continue;
    }
    std::string_view body = text.substr(i + 1, semi - i - 1);
    bool decoded = false;
    if (body.size() > 1 && body[0] == '#') {
      bool hex = body[1] == 'x' || body[1] == 'X';
      std::string_view digits = body.substr(hex ? 2 : 1);
      uint32_t cp = 0;
      auto [ptr, ec] = std::from_chars(digits.data(),
                                       digits.data() + digits.size(), cp,
                                       hex ? 16 : 10);
      if (!digits.empty() && ec == std::errc() &&
          ptr == digits.data() + digits.size()) {
        AppendUtf8(cp, &out);
        decoded = true;
      }
    } else {
      for (const Named& named : kNamed) {
        if (EqualsIgnoreCase(body, named.name)) {
          AppendUtf8(named.code_point, &out);
          decoded = true;
          break;
        }
      }
    }
    if (decoded) {
      i = semi + 1;
    } else {
      out += text[i++];
    }
  }
  return out;
}

}  // namespace xssguard
