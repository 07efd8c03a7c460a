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

#include "xssguard/content_coding.h"

#include <zlib.h>

#include <stdexcept>

#include "xssguard/strings.h"

namespace xssguard {

namespace {

// window_bits: 15 + 32 auto-detects zlib or gzip headers; -15 is raw deflate.
std::optional<std::string> Inflate(std::string_view in, int window_bits,
                                   size_t max_output) {
  z_stream stream{};
  if (inflateInit2(&stream, window_bits) != Z_OK) return std::nullopt;
  stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  stream.avail_in = static_cast<uInt>(in.size());

  std::string out;
  char buffer[16384];
  int status = Z_OK;
  while (status != Z_STREAM_END) {
    stream.next_out = reinterpret_cast<Bytef*>(buffer);
    stream.avail_out = sizeof(buffer);
    status = inflate(&stream, Z_NO_FLUSH);
    if (status != Z_OK && status != Z_STREAM_END) break;
    out.append(buffer, sizeof(buffer) - stream.avail_out);
    if (out.size() > max_output) break;
    if (status == Z_OK && stream.avail_in == 0 && stream.avail_out != 0) break;
  }
  inflateEnd(&stream);
  if (status != Z_STREAM_END || out.size() > max_output) return std::nullopt;
  return out;
}

}  // namespace

std::optional<std::string> DecodeContent(std::string_view body,
                                         std::string_view encoding,
                                         size_t max_output) {
  std::string coding = ToLowerAscii(TrimAsciiWhitespace(encoding));
  if (coding.empty() || coding == "identity") {
    if (body.size() > max_output) return std::nullopt;
    return std::string(body);
  }
  if (coding == "gzip" || coding == "x-gzip") {
    return Inflate(body, 15 + 32, max_output);
  }
  if (coding == "deflate") {
    if (auto out = Inflate(body, 15 + 32, max_output)) return out;
    return Inflate(body, -15, max_output);
  }
  return std::nullopt;
}

std::string GzipCompress(std::string_view data) {
  z_stream stream{};
  if (deflateInit2(&stream, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK) {
    throw std::runtime_error("deflateInit2 failed");
  }
  std::string out(deflateBound(&stream, data.size()) + 32, '\0');
  stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  stream.avail_in = static_cast<uInt>(data.size());
  stream.next_out = reinterpret_cast<Bytef*>(out.data());
  stream.avail_out = static_cast<uInt>(out.size());
  int status = deflate(&stream, Z_FINISH);
  deflateEnd(&stream);
  if (status != Z_STREAM_END) throw std::runtime_error("deflate failed");
  out.resize(stream.total_out);
  return out;
}

}  // namespace xssguard
