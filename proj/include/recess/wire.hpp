/*
 * Copyright 2026 The Recess Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RECESS_WIRE_HPP_
#define RECESS_WIRE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recess/image.hpp"

namespace recess::wire {

// External predictor protocol: one JSON object per line over the child's
// stdin/stdout.
//
//   request:  {"id": u64, "height": H, "width": W, "channels": C,
//              "pixels": base64(H*W*C little-endian float32, interleaved)}
//   response: {"id": u64, "label": int, "scores": [float, ...]}   scores optional
//   error:    {"id": u64, "error": "message"}

std::string base64_encode(std::span<const std::uint8_t> bytes);
// Throws FormatError on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

std::vector<std::uint8_t> pack_float32(std::span<const double> values);
std::vector<double> unpack_float32(std::span<const std::uint8_t> bytes);

struct Request {
  std::uint64_t id = 0;
  Image image;
};

struct Response {
  std::uint64_t id = 0;
  int label = 0;
  std::optional<std::vector<double>> scores;
  std::optional<std::string> error;
};

// Serialised without the trailing newline.
std::string encode_request(std::uint64_t id, const Image& image);
// Throws FormatError naming the problem (including expected byte counts).
Request decode_request(std::string_view line);

std::string encode_response(const Response& response);
Response decode_response(std::string_view line);

}  // namespace recess::wire

#endif  // RECESS_WIRE_HPP_
