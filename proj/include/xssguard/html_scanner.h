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

#ifndef XSSGUARD_HTML_SCANNER_H_
#define XSSGUARD_HTML_SCANNER_H_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xssguard {

struct HtmlAttribute {
  std::string name;  // lowercased
  std::string value;  // character references decoded
  bool has_value = false;
  bool unterminated = false;  // quoted value ran to end of input
};

// One start tag as seen by the scanner. Offsets index the scanned document;
// [begin, end) covers "<tag ...>" including both angle brackets.
struct HtmlStartTag {
  std::string name;  // lowercased
  std::vector<HtmlAttribute> attributes;
  size_t begin = 0;
  size_t end = 0;
  // Body of raw-text elements (script, style, textarea, title, xmp); empty
  // for everything else.
  std::string_view raw_text;

  // First attribute with `name`; duplicates are ignored as browsers do.
  const HtmlAttribute* Find(std::string_view attribute_name) const;
};

// Visits every start tag of `document` in order. Comments, doctype and
// processing instructions, end tags and character data are skipped; markup
// inside raw-text elements is not interpreted. Never fails: unclosed tags,
// missing quotes and stray '<' are tolerated. Returning false from `visit`
// stops the scan.
void ScanStartTags(std::string_view document,
                   const std::function<bool(const HtmlStartTag&)>& visit);

// Decodes the named references &amp; &lt; &gt; &quot; &apos; &nbsp; and all
// numeric references. Unknown references are left verbatim.
std::string DecodeCharacterReferences(std::string_view text);

}  // namespace xssguard

#endif  // XSSGUARD_HTML_SCANNER_H_
