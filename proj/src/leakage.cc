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

#include "xssguard/leakage.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace xssguard {

namespace {

void CheckDomain(uint64_t n, uint64_t r) {
  if (r > n) {
    throw std::domain_error("leakage: r = " + std::to_string(r) +
                            " exceeds n = " + std::to_string(n));
  }
}

}  // namespace

BigUint DistinctValues(uint64_t n, uint64_t r) {
  CheckDomain(n, r);
  if (r == 0) return 0;
  BigUint product = 1;
  for (uint64_t k = n - r + 1; k <= n; ++k) product *= k;
  return product;
}

uint64_t LeakageBits(uint64_t n, uint64_t r) {
  BigUint values = DistinctValues(n, r);
  if (values <= 1) return 0;
  return boost::multiprecision::msb(values);
}

uint64_t MaxRequestsWithin(uint64_t n, uint64_t budget_bits) {
  // Bits are non-decreasing in r, so the first overshoot ends the scan.
  uint64_t best = 0;
  BigUint values = 1;
  for (uint64_t r = 1; r <= n; ++r) {
    values *= n - r + 1;
    uint64_t bits = values <= 1 ? 0 : boost::multiprecision::msb(values);
    if (bits > budget_bits) break;
    best = r;
  }
  return best;
}

void LeakageLedger::set_link_count(uint64_t n) {
  n_ = std::max<uint64_t>(n, followed_.size());
  bits_ = LeakageBits(n_, followed_.size());
}

GateDecision LeakageLedger::RecordAndCheck(const AbsoluteUrl& link,
                                           const ThresholdConfig& config) {
  if (followed_.contains(link)) return GateDecision::kAllow;
  const uint64_t prospective_r = followed_.size() + 1;
  if (prospective_r > n_) {
    throw std::logic_error("leakage: metered link outside the inventory: " +
                           link.spec());
  }
  const uint64_t prospective_bits = LeakageBits(n_, prospective_r);
  if (prospective_bits > config.max_bits) return GateDecision::kDeny;
  followed_.insert(link);
  bits_ = prospective_bits;
  return GateDecision::kAllow;
}

}  // namespace xssguard
