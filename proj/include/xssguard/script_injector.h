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

#ifndef XSSGUARD_SCRIPT_INJECTOR_H_
#define XSSGUARD_SCRIPT_INJECTOR_H_

#include <string>
#include <string_view>

namespace xssguard {

// The control script every proxied page receives. It clears window.name in
// pop-ups opened from another origin and only lets a query-string frame
// target through when it has no scheme.
struct InjectionPayload {
  // Attribute carried by the injected <script> element, once.
  std::string_view marker;
  std::string_view version;
  // The JavaScript source.
  std::string_view source;
  // The complete element as inserted: <script ... marker>source</script>.
  std::string element;
};

const InjectionPayload& BuildPayload();

// Offset at which Inject() places the payload: just after the first <head>
// start tag (unless a <script> start tag precedes it, in which case just
// before that script); else just before the first <body> start tag; else 0.
size_t InjectionOffset(std::string_view document);

// Inserts the payload element at InjectionOffset(). A document that already
// carries the payload at that point is returned unchanged, so Inject is
// idempotent. Otherwise the output is the input with exactly the payload
// element inserted.
std::string Inject(std::string_view document);

}  // namespace xssguard

#endif  // XSSGUARD_SCRIPT_INJECTOR_H_
