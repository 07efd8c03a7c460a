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

#include "xssguard/url.h"

#include <array>
#include <charconv>
#include <vector>

#include "xssguard/strings.h"

namespace xssguard {

namespace {

constexpr std::array<std::string_view, 5> kScriptBearingSchemes = {
    "javascript", "data", "mailto", "about", "vbscript"};

bool IsSchemeChar(char c, bool first) {
  if (IsAsciiAlpha(c)) return true;
  if (first) return false;
  return IsAsciiDigit(c) || c == '+' || c == '-' || c == '.';
}

// Length of a leading "scheme:" prefix excluding the colon, or 0.
size_t SchemeLength(std::string_view s) {
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == ':') return i;
    if (!IsSchemeChar(s[i], i == 0)) return 0;
  }
  return 0;
}

bool IsValidHostChar(char c) {
  return IsAsciiAlpha(c) || IsAsciiDigit(c) || c == '-' || c == '.' ||
         c == '_' || c == '~' || c == '%';
}

bool ParseHost(std::string_view raw, std::string* host) {
  if (raw.empty()) return false;
  if (raw.front() == '[') {
    if (raw.back() != ']' || raw.size() < 3) return false;
    for (char c : raw.substr(1, raw.size() - 2)) {
      if (!IsAsciiHexDigit(c) && c != ':' && c != '.') return false;
    }
    *host = ToLowerAscii(raw);
    return true;
  }
  for (char c : raw) {
    if (!IsValidHostChar(c)) return false;
  }
  std::string lowered = ToLowerAscii(raw);
  while (!lowered.empty() && lowered.back() == '.') lowered.pop_back();
  if (lowered.empty() || lowered.front() == '.') return false;
  *host = std::move(lowered);
  return true;
}

// RFC 3986 section 5.2.4.
std::string RemoveDotSegments(std::string_view path) {
  std::vector<std::string_view> out;
  bool trailing_slash = false;
  size_t pos = 0;
  if (!path.empty() && path.front() == '/') pos = 1;
  while (pos <= path.size()) {
    size_t end = path.find('/', pos);
    if (end == std::string_view::npos) end = path.size();
    std::string_view segment = path.substr(pos, end - pos);
    bool last = end == path.size();
    if (segment == ".") {
      trailing_slash = last;
    } else if (segment == "..") {
      if (!out.empty()) out.pop_back();
      trailing_slash = last;
    } else {
      out.push_back(segment);
      trailing_slash = false;
    }
    pos = end + 1;
  }
  std::string result;
  for (std::string_view segment : out) {
    result += '/';
    result += segment;
  }
  if (trailing_slash || result.empty()) result += '/';
  return result;
}

// Strips ASCII whitespace at the ends and tab/CR/LF everywhere, as browsers
// do before interpreting an attribute URL.
std::string CleanReference(std::string_view raw) {
  std::string_view trimmed = TrimAsciiWhitespace(raw);
  std::string out;
  out.reserve(trimmed.size());
  for (char c : trimmed) {
    if (c != '\t' && c != '\n' && c != '\r') out += c;
  }
  return out;
}

// Percent-encodes bytes that may not appear literally in a URL. Existing
// escapes are left alone, so the operation is idempotent.
std::string EscapeUnsafeBytes(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    auto b = static_cast<unsigned char>(c);
    if (b <= 0x20 || b >= 0x7f || c == '"' || c == '<' || c == '>' ||
        c == '`') {
      out += '%';
      out += kHex[b >> 4];
      out += kHex[b & 0xf];
    } else {
      out += c;
    }
  }
  return out;
}

std::string WithoutFragment(std::string_view s) {
  size_t hash = s.find('#');
  return std::string(s.substr(0, hash));
}

void SplitPathQuery(std::string_view s, std::string* path,
                    std::optional<std::string>* query) {
  size_t q = s.find('?');
  if (q == std::string_view::npos) {
    *path = std::string(s);
    query->reset();
  } else {
    *path = std::string(s.substr(0, q));
    *query = std::string(s.substr(q + 1));
  }
}

}  // namespace

int DefaultPortForScheme(std::string_view scheme) {
  if (scheme == "http" || scheme == "ws") return 80;
  if (scheme == "https" || scheme == "wss") return 443;
  if (scheme == "ftp") return 21;
  return 0;
}

std::optional<AbsoluteUrl> AbsoluteUrl::Parse(std::string_view text) {
  std::string cleaned = WithoutFragment(CleanReference(text));
  std::string_view s = cleaned;
  size_t scheme_len = SchemeLength(s);
  if (scheme_len == 0) return std::nullopt;
  AbsoluteUrl url;
  url.scheme = ToLowerAscii(s.substr(0, scheme_len));
  s.remove_prefix(scheme_len + 1);
  if (s.size() < 2 || s[0] != '/' || s[1] != '/') return std::nullopt;
  s.remove_prefix(2);

  size_t authority_end = s.find_first_of("/?");
  std::string_view authority = s.substr(0, authority_end);
  std::string_view rest =
      authority_end == std::string_view::npos ? "" : s.substr(authority_end);

  if (size_t at = authority.rfind('@'); at != std::string_view::npos) {
    authority.remove_prefix(at + 1);
  }
  std::string_view host_part = authority;
  std::string_view port_part;
  size_t colon = authority.rfind(':');
  size_t bracket = authority.rfind(']');
  if (colon != std::string_view::npos &&
      (bracket == std::string_view::npos || colon > bracket)) {
    host_part = authority.substr(0, colon);
    port_part = authority.substr(colon + 1);
  }
  if (!ParseHost(host_part, &url.host)) return std::nullopt;

  url.port = DefaultPortForScheme(url.scheme);
  if (!port_part.empty()) {
    int port = 0;
    auto [ptr, ec] = std::from_chars(port_part.data(),
                                     port_part.data() + port_part.size(), port);
    if (ec != std::errc() || ptr != port_part.data() + port_part.size() ||
        port <= 0 || port > 65535) {
      return std::nullopt;
    }
    url.port = port;
  }

  std::string path;
  SplitPathQuery(EscapeUnsafeBytes(rest), &path, &url.query);
  url.path = RemoveDotSegments(path);
  return url;
}

bool AbsoluteUrl::has_default_port() const {
  return port == DefaultPortForScheme(scheme);
}

std::string AbsoluteUrl::origin() const {
  std::string out = scheme + "://" + host;
  if (!has_default_port()) out += ":" + std::to_string(port);
  return out;
}

std::string AbsoluteUrl::spec() const {
  std::string out = origin() + path;
  if (query) out += "?" + *query;
  return out;
}

bool IsScriptBearingReference(std::string_view raw) {
  std::string cleaned = CleanReference(raw);
  size_t len = SchemeLength(cleaned);
  if (len == 0) return false;
  std::string scheme = ToLowerAscii(std::string_view(cleaned).substr(0, len));
  for (std::string_view blocked : kScriptBearingSchemes) {
    if (scheme == blocked) return true;
  }
  return false;
}

std::optional<AbsoluteUrl> ResolveLink(const AbsoluteUrl& base,
                                       std::string_view raw) {
  if (IsScriptBearingReference(raw)) return std::nullopt;
  std::string ref = WithoutFragment(CleanReference(raw));
  std::string_view r = ref;

  if (SchemeLength(r) > 0) return AbsoluteUrl::Parse(r);
  if (r.size() >= 2 && r[0] == '/' && r[1] == '/') {
    return AbsoluteUrl::Parse(base.scheme + ":" + ref);
  }

  AbsoluteUrl out = base;
  if (r.empty()) return out;
  if (r.front() == '?') {
    out.query = EscapeUnsafeBytes(r.substr(1));
    return out;
  }

  std::string path;
  std::optional<std::string> query;
  SplitPathQuery(r, &path, &query);
  if (path.front() != '/') {
    size_t slash = base.path.rfind('/');
    path = base.path.substr(0, slash + 1) + path;
  }
  out.path = RemoveDotSegments(EscapeUnsafeBytes(path));
  out.query = std::move(query);
  if (out.query) out.query = EscapeUnsafeBytes(*out.query);
  return out;
}

}  // namespace xssguard
