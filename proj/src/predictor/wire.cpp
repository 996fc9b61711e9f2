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

#include "recess/wire.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cmath>
#include <json.hpp>

#include "recess/error.hpp"

namespace recess::wire {
namespace {

using nlohmann::json;

json parse_object(std::string_view line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw FormatError("not a JSON object: '" + std::string(line.substr(0, 80)) + "'");
  }
  return j;
}

template <typename T>
T field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw FormatError(std::string("missing field '") + name + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("field '") + name + "' has the wrong type");
  }
}

std::uint64_t id_field(const json& j) {
  const auto it = j.find("id");
  if (it == j.end() || !it->is_number_unsigned()) {
    throw FormatError("field 'id' must be an unsigned integer");
  }
  return it->get<std::uint64_t>();
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int written = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                      bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(written));
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) {
    throw FormatError("base64 length " + std::to_string(text.size()) +
                      " is not a multiple of 4");
  }
  std::vector<std::uint8_t> out(3 * (text.size() / 4));
  const int written =
      EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                      static_cast<int>(text.size()));
  if (written < 0) throw FormatError("invalid base64 payload");
  // EVP_DecodeBlock counts padding bytes as data.
  std::size_t padding = 0;
  if (!text.empty() && text.back() == '=') ++padding;
  if (text.size() >= 2 && text[text.size() - 2] == '=') ++padding;
  out.resize(static_cast<std::size_t>(written) - padding);
  return out;
}

std::vector<std::uint8_t> pack_float32(std::span<const double> values) {
  std::vector<std::uint8_t> out;
  out.reserve(values.size() * 4);
  for (double v : values) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  return out;
}

std::vector<double> unpack_float32(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 4 != 0) throw FormatError("float32 payload not a multiple of 4 bytes");
  std::vector<double> out(bytes.size() / 4);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::uint32_t bits = 0;
    for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(bytes[4 * k + i]) << (8 * i);
    out[k] = std::bit_cast<float>(bits);
  }
  return out;
}

std::string encode_request(std::uint64_t id, const Image& image) {
  const json j = {{"id", id},
                  {"height", image.height()},
                  {"width", image.width()},
                  {"channels", image.channels()},
                  {"pixels", base64_encode(pack_float32(image.pixels()))}};
  return j.dump();
}

Request decode_request(std::string_view line) {
  const json j = parse_object(line);
  const std::uint64_t id = id_field(j);
  const Shape shape{field<std::size_t>(j, "height"), field<std::size_t>(j, "width"),
                    field<std::size_t>(j, "channels")};
  const std::vector<std::uint8_t> bytes = base64_decode(field<std::string>(j, "pixels"));
  const std::size_t expected = shape.size() * 4;
  if (bytes.size() != expected) {
    throw FormatError("pixel payload has " + std::to_string(bytes.size()) +
                      " bytes, expected " + std::to_string(expected));
  }
  try {
    return Request{id, Image(shape, unpack_float32(bytes))};
  } catch (const ContractError& e) {
    throw FormatError(std::string("invalid image in request: ") + e.what());
  }
}

std::string encode_response(const Response& response) {
  json j = {{"id", response.id}};
  if (response.error) {
    j["error"] = *response.error;
  } else {
    j["label"] = response.label;
    if (response.scores) j["scores"] = *response.scores;
  }
  return j.dump();
}

Response decode_response(std::string_view line) {
  const json j = parse_object(line);
  Response response;
  response.id = id_field(j);
  if (j.contains("error")) {
    response.error = field<std::string>(j, "error");
    return response;
  }
  const auto label = j.find("label");
  if (label == j.end() || !label->is_number_integer()) {
    throw FormatError("field 'label' must be an integer");
  }
  response.label = label->get<int>();
  if (j.contains("scores")) {
    auto scores = field<std::vector<double>>(j, "scores");
    for (double s : scores) {
      if (!std::isfinite(s)) throw FormatError("non-finite score");
    }
    response.scores = std::move(scores);
  }
  return response;
}

}  // namespace recess::wire
