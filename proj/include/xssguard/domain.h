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

#ifndef XSSGUARD_DOMAIN_H_
#define XSSGUARD_DOMAIN_H_

#include <compare>
#include <string>
#include <string_view>

#include "xssguard/url.h"

namespace xssguard {

// The registrable domain ("site") a host belongs to, e.g. chennaionline.com
// for www.chennaionline.com. Only constructible through RegistrableDomain().
class DomainKey {
 public:
  const std::string& value() const { return value_; }

  friend auto operator<=>(const DomainKey&, const DomainKey&) = default;
  friend bool operator==(const DomainKey&, const DomainKey&) = default;

 private:
  friend DomainKey RegistrableDomain(std::string_view host);
  explicit DomainKey(std::string value) : value_(std::move(value)) {}

  std::string value_;
};

// Public suffix plus one label. IP literals and single-label hosts are their
// own key; a host that is itself a listed public suffix is returned as is.
DomainKey RegistrableDomain(std::string_view host);

// True iff both URLs fall in the same registrable domain.
bool IsLocal(const AbsoluteUrl& request_url, const AbsoluteUrl& referrer);

bool IsIpLiteral(std::string_view host);

// Version string of the embedded public suffix table.
std::string_view PublicSuffixTableVersion();

}  // namespace xssguard

#endif  // XSSGUARD_DOMAIN_H_
