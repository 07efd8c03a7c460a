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

#include "xssguard/http_message.h"

#include <algorithm>

#include "xssguard/strings.h"

namespace xssguard {

std::optional<std::string_view> HeaderList::Get(std::string_view name) const {
  for (const auto& [key, value] : fields_) {
    if (EqualsIgnoreCase(key, name)) return value;
  }
  return std::nullopt;
}

void HeaderList::Add(std::string name, std::string value) {
  fields_.emplace_back(std::move(name), std::move(value));
}

void HeaderList::Set(std::string_view name, std::string value) {
  Remove(name);
  fields_.emplace_back(std::string(name), std::move(value));
}

void HeaderList::Remove(std::string_view name) {
  std::erase_if(fields_,
                [name](const Field& f) { return EqualsIgnoreCase(f.first, name); });
}

std::optional<ProxyRequest> ProxyRequest::FromWire(std::string method,
                                                   std::string_view target,
                                                   HeaderList headers,
                                                   std::string body) {
  std::optional<AbsoluteUrl> url;
  if (!target.empty() && target.front() == '/') {
    auto host = headers.Get("Host");
    if (!host || host->empty()) return std::nullopt;
    url = AbsoluteUrl::Parse("http://" + std::string(*host) + std::string(target));
  } else {
    url = AbsoluteUrl::Parse(target);
  }
  if (!url) return std::nullopt;

  ProxyRequest request;
  request.method = std::move(method);
  request.url = std::move(*url);
  if (auto referer = headers.Get("Referer")) {
    request.referrer = AbsoluteUrl::Parse(*referer);
  }
  request.headers = std::move(headers);
  request.body = std::move(body);
  return request;
}

std::string MediaType(const HeaderList& headers) {
  auto value = headers.Get("Content-Type");
  if (!value) return {};
  std::string_view type = *value;
  type = type.substr(0, type.find(';'));
  return ToLowerAscii(TrimAsciiWhitespace(type));
}

}  // namespace xssguard
