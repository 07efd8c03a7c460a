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

#ifndef XSSGUARD_CONTENT_CODING_H_
#define XSSGUARD_CONTENT_CODING_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace xssguard {

// Decodes a body with the given Content-Encoding. "" and "identity" return
// the input; gzip, x-gzip and deflate (zlib-wrapped or raw) are inflated.
// Returns nullopt for unsupported codings, corrupt data, or output larger
// than `max_output`.
std::optional<std::string> DecodeContent(std::string_view body,
                                         std::string_view encoding,
                                         size_t max_output);

std::string GzipCompress(std::string_view data);

}  // namespace xssguard

#endif  // XSSGUARD_CONTENT_CODING_H_
