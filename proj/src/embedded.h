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

// Text assets compiled in from data/ (see xssguard_embed_text in CMake).

#ifndef XSSGUARD_SRC_EMBEDDED_H_
#define XSSGUARD_SRC_EMBEDDED_H_

#include <string_view>

namespace xssguard::embedded {

std::string_view PublicSuffixes();
std::string_view ControlScript();

}  // namespace xssguard::embedded

#endif  // XSSGUARD_SRC_EMBEDDED_H_
