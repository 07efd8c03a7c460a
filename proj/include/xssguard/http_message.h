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

// Transport-independent HTTP request/response values. The proxy server
// converts to and from the wire; everything above it works on these.

#ifndef XSSGUARD_HTTP_MESSAGE_H_
#define XSSGUARD_HTTP_MESSAGE_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xssguard/url.h"

namespace xssguard {

// Ordered multimap of header fields; names compare case-insensitively.
class HeaderList {
 public:
  using Field = std::pair<std::string, std::string>;

  HeaderList() = default;
  HeaderList(std::initializer_list<Field> fields) : fields_(fields) {}

  // Value of the first field called `name`.
  std::optional<std::string_view> Get(std::string_view name) const;
  void Add(std::string name, std::string value);
  // Replaces all fields called `name` with a single one.
  void Set(std::string_view name, std::string value);
  void Remove(std::string_view name);

  const std::vector<Field>& fields() const { return fields_; }
  auto begin() const { return fields_.begin(); }
  auto end() const { return fields_.end(); }

 private:
  std::vector<Field> fields_;
};

struct ProxyRequest {
  std::string method = "GET";
  AbsoluteUrl url;
  // From the "Referer" header; absent when missing or unparseable.
  std::optional<AbsoluteUrl> referrer;
  HeaderList headers;
  std::string body;

  // Builds a request from wire parts. `target` is absolute-form, or
  // origin-form combined with the Host header. Returns nullopt when no
  // absolute URL can be formed.
  static std::optional<ProxyRequest> FromWire(std::string method,
                                              std::string_view target,
                                              HeaderList headers,
                                              std::string body = {});
};

struct HttpResponse {
  int status = 200;
  std::string reason = "OK";
  HeaderList headers;
  std::string body;
};

// Lowercased media type without parameters: "text/html; charset=x" ->
// "text/html".
std::string MediaType(const HeaderList& headers);

}  // namespace xssguard

#endif  // XSSGUARD_HTTP_MESSAGE_H_
