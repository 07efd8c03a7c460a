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

// Information leakage accounting for static external links.
//
// An attacker who controls script in a page but may only contact the page's
// n distinct static external links can still encode a message in *which*
// links are requested and in what order. Issuing r distinct requests picks
// one ordered r-tuple out of n!/(n-r)! possibilities, so the channel carries
// floor(log2(n!/(n-r)!)) bits. With no request at all nothing is sent, and
// the count is defined as 0 rather than 1.
//
// All arithmetic is exact; no floating point is involved anywhere.

#ifndef XSSGUARD_LEAKAGE_H_
#define XSSGUARD_LEAKAGE_H_

#include <cstdint>
#include <set>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "xssguard/url.h"

namespace xssguard {

using BigUint = boost::multiprecision::cpp_int;

// Number of distinguishable messages for r requests among n links: 0 when
// r == 0, otherwise the falling factorial n (n-1) ... (n-r+1).
// Throws std::domain_error when r > n.
BigUint DistinctValues(uint64_t n, uint64_t r);

// floor(log2(DistinctValues(n, r))), and 0 whenever that value is <= 1.
// Throws std::domain_error when r > n.
uint64_t LeakageBits(uint64_t n, uint64_t r);

// Largest r <= n with LeakageBits(n, r) <= budget_bits.
uint64_t MaxRequestsWithin(uint64_t n, uint64_t budget_bits);

struct ThresholdConfig {
  uint64_t max_bits = 50;
};

enum class GateDecision { kAllow, kDeny };

// Per page context record of which static external links have actually been
// requested. Callers must hold the page's state guard; the type itself is
// not synchronized.
class LeakageLedger {
 public:
  LeakageLedger() = default;
  explicit LeakageLedger(uint64_t link_count) : n_(link_count) {}

  uint64_t n() const { return n_; }
  uint64_t r() const { return followed_.size(); }
  uint64_t bits() const { return bits_; }
  const std::set<AbsoluteUrl>& followed() const { return followed_; }

  // Tracks growth of the page's inventory (e.g. links found in a stylesheet
  // after the page itself was analyzed). Never shrinks below r.
  void set_link_count(uint64_t n);

  // Meters one request for `link`, which must be one of the n inventory
  // links. A repeat of an already followed link is allowed unchanged; a new
  // link is admitted only if the bits with r + 1 stay within the threshold,
  // otherwise the ledger is left untouched.
  GateDecision RecordAndCheck(const AbsoluteUrl& link,
                              const ThresholdConfig& config);

 private:
  uint64_t n_ = 0;
  std::set<AbsoluteUrl> followed_;
  uint64_t bits_ = 0;
};

}  // namespace xssguard

#endif  // XSSGUARD_LEAKAGE_H_
