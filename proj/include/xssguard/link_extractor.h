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

// Static link extraction from HTML and CSS.
//
// A static link is a URL literally present in the served markup: any
// element's href or src attribute, or a url(...) token inside a <style>
// block or a style attribute. Links that appear only in text, comments or
// script bodies are not static and are never extracted; those are exactly
// the links an injected script would have to construct at runtime.

#ifndef XSSGUARD_LINK_EXTRACTOR_H_
#define XSSGUARD_LINK_EXTRACTOR_H_

#include <cstddef>
#include <set>
#include <string_view>

#include "xssguard/url.h"

namespace xssguard {

struct ExtractionStats {
  size_t documents = 0;
  size_t stylesheets = 0;
  size_t link_attributes = 0;  // href/src attributes and url() tokens seen
  size_t unparseable = 0;
  size_t script_bearing = 0;  // javascript:, data:, mailto:, about: ...
  size_t frames = 0;

  ExtractionStats& operator+=(const ExtractionStats& other);
  friend bool operator==(const ExtractionStats&,
                         const ExtractionStats&) = default;
};

// The distinct static links of one page, split by whether they stay in the
// page's registrable domain.
struct LinkInventory {
  AbsoluteUrl page_url;
  std::set<AbsoluteUrl> external_links;
  std::set<AbsoluteUrl> local_links;
  // frame/iframe sources; each is also in one of the two sets above. Their
  // documents are analyzed when the browser fetches them.
  std::set<AbsoluteUrl> frame_links;
  ExtractionStats stats;

  size_t n() const { return external_links.size(); }

  // Classifies `link` against page_url and inserts it. Returns true when the
  // link is new.
  bool Add(const AbsoluteUrl& link);

  bool ContainsExternal(const AbsoluteUrl& link) const {
    return external_links.contains(link);
  }
};

// Builds the inventory of `document`. `base` is the document's own URL; a
// <base href> in the document changes resolution but not classification.
// Bytes are treated as Latin-1, so non-ASCII input never fails decoding.
LinkInventory ExtractStaticLinks(std::string_view document,
                                 const AbsoluteUrl& base);

// All url(...) operands in `css`, resolved against `base`. Malformed tokens
// and script-bearing operands are skipped and counted in `stats` if given.
std::set<AbsoluteUrl> ExtractCssUrls(std::string_view css,
                                     const AbsoluteUrl& base,
                                     ExtractionStats* stats = nullptr);

}  // namespace xssguard

#endif  // XSSGUARD_LINK_EXTRACTOR_H_
