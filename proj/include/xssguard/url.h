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

#ifndef XSSGUARD_URL_H_
#define XSSGUARD_URL_H_

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace xssguard {

// A parsed, normalized absolute URL with an authority component.
//
// Normalization: scheme and host are lowercased, the default port of the
// scheme is folded into `port`, dot segments are removed from the path, an
// empty path becomes "/" and the fragment is dropped. Two URLs naming the
// same resource therefore compare equal.
struct AbsoluteUrl {
  std::string scheme;
  std::string host;
  int port = 0;
  std::string path = "/";
  std::optional<std::string> query;

  // Returns nullopt unless `text` is "scheme://host..." with a valid host.
  static std::optional<AbsoluteUrl> Parse(std::string_view text);

  // Canonical serialization; default ports are omitted.
  std::string spec() const;

  // "scheme://host[:port]"
  std::string origin() const;

  bool has_default_port() const;

  friend auto operator<=>(const AbsoluteUrl&, const AbsoluteUrl&) = default;
  friend bool operator==(const AbsoluteUrl&, const AbsoluteUrl&) = default;
};

// Port implied by `scheme`, or 0 when the scheme has no well-known port.
int DefaultPortForScheme(std::string_view scheme);

// True for references whose scheme carries script or inline data rather than
// a fetchable location (javascript:, data:, mailto:, about:, vbscript:).
bool IsScriptBearingReference(std::string_view raw);

// Resolves an HTML/CSS link reference against `base`. Leading and trailing
// whitespace and embedded tabs/newlines are ignored. Returns nullopt for
// script-bearing references and for anything that does not resolve to an
// AbsoluteUrl.
std::optional<AbsoluteUrl> ResolveLink(const AbsoluteUrl& base,
                                       std::string_view raw);

}  // namespace xssguard

#endif  // XSSGUARD_URL_H_
