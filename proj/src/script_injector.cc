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

#include <optional>

#include "embedded.h"
#include "xssguard/html_scanner.h"

namespace xssguard {

namespace {

constexpr std::string_view kMarker = "data-xssguard-control";
constexpr std::string_view kVersion = "1";

struct Landmarks {
  std::optional<size_t> head_end;
  std::optional<size_t> first_script;  // only if before the head tag
  std::optional<size_t> body_begin;
};

Landmarks FindLandmarks(std::string_view document) {
  Landmarks marks;
  ScanStartTags(document, [&](const HtmlStartTag& tag) {
    if (tag.name == "head") {
      marks.head_end = tag.end;
      return false;
    }
    if (tag.name == "script" && !marks.first_script) {
      marks.first_script = tag.begin;
    }
    if (tag.name == "body" && !marks.body_begin) marks.body_begin = tag.begin;
    return true;
  });
  return marks;
}

}  // namespace

const InjectionPayload& BuildPayload() {
  static const InjectionPayload* payload = [] {
    auto* p = new InjectionPayload;
    p->marker = kMarker;
    p->version = kVersion;
    p->source = embedded::ControlScript();
    p->element = "<script type=\"text/javascript\" ";
    p->element += kMarker;
    p->element += "=\"";
    p->element += kVersion;
    p->element += "\">\n";
    p->element += p->source;
    if (!p->element.ends_with('\n')) p->element += '\n';
    p->element += "</script>";
    return p;
  }();
  return *payload;
}

size_t InjectionOffset(std::string_view document) {
  Landmarks marks = FindLandmarks(document);
  if (marks.head_end) {
    if (marks.first_script && *marks.first_script < *marks.head_end) {
      return *marks.first_script;
    }
    return *marks.head_end;
  }
  if (marks.body_begin) return *marks.body_begin;
  return 0;
}

std::string Inject(std::string_view document) {
  const std::string& element = BuildPayload().element;
  size_t offset = InjectionOffset(document);
  // Already injected: the element sits right at the insertion point, or,
  // for the before-<script>/<body> placements, right before it.
  if (document.substr(offset).starts_with(element)) return std::string(document);
  if (offset >= element.size() &&
      document.substr(offset - element.size(), element.size()) == element) {
    return std::string(document);
  }
  std::string out;
  out.reserve(document.size() + element.size());
  out.append(document.substr(0, offset));
  out.append(element);
  out.append(document.substr(offset));
  return out;
}

}  // namespace xssguard
