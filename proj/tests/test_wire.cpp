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

#include <gtest/gtest.h>

#include <json.hpp>
#include <random>

#include "oracles.hpp"
#include "recess/error.hpp"
#include "recess/predictor.hpp"
#include "recess/wire.hpp"

using namespace recess;
using namespace recess::wire;

namespace {

std::vector<std::string> fixture(std::initializer_list<std::string> flags) {
  std::vector<std::string> argv{RECESS_FIXTURE_PREDICTOR};
  argv.insert(argv.end(), flags);
  return argv;
}

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(Base64, KnownVectors) {
  EXPECT_EQ(base64_encode(bytes_of("")), "");
  EXPECT_EQ(base64_encode(bytes_of("M")), "TQ==");
  EXPECT_EQ(base64_encode(bytes_of("Ma")), "TWE=");
  EXPECT_EQ(base64_encode(bytes_of("Man")), "TWFu");
  EXPECT_EQ(base64_decode("TQ=="), bytes_of("M"));
  EXPECT_EQ(base64_decode("TWE="), bytes_of("Ma"));
  EXPECT_EQ(base64_decode("TWFu"), bytes_of("Man"));
  EXPECT_THROW(base64_decode("TWF"), FormatError);
  EXPECT_THROW(base64_decode("T!=="), FormatError);
}

TEST(Base64, RandomRoundTrip) {
  std::mt19937_64 rng(41);
  for (std::size_t n = 0; n < 40; ++n) {
    std::vector<std::uint8_t> b(n);
    for (auto& v : b) v = static_cast<std::uint8_t>(rng());
    EXPECT_EQ(base64_decode(base64_encode(b)), b);
  }
}

TEST(Float32, LittleEndianPacking) {
  const auto b = pack_float32(std::vector<double>{1.0, 0.5});
  EXPECT_EQ(b, (std::vector<std::uint8_t>{0x00, 0x00, 0x80, 0x3f, 0x00, 0x00, 0x00, 0x3f}));
  EXPECT_EQ(unpack_float32(b), (std::vector<double>{1.0, 0.5}));
  EXPECT_THROW(unpack_float32(std::vector<std::uint8_t>{1, 2, 3}), FormatError);
}

TEST(Request, RoundTripAndFields) {
  std::mt19937_64 rng(42);
  const Image img = oracle::random_image(rng, Shape{3, 4, 3});
  const std::string line = encode_request(17, img);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  const auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j["id"], 17);
  EXPECT_EQ(j["height"], 3);
  EXPECT_EQ(j["width"], 4);
  EXPECT_EQ(j["channels"], 3);
  const Request r = decode_request(line);
  EXPECT_EQ(r.id, 17u);
  EXPECT_LE(max_abs_diff(r.image, img), 1e-7);
}

TEST(Request, WrongPayloadLengthNamesExpectedBytes) {
  auto j = nlohmann::json::parse(encode_request(1, Image::filled(Shape{2, 2, 1}, 0.5)));
  j["pixels"] = base64_encode(pack_float32(std::vector<double>{0.5, 0.5, 0.5}));
  try {
    (void)decode_request(j.dump());
    FAIL();
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("12"), std::string::npos) << msg;
    EXPECT_NE(msg.find("16"), std::string::npos) << msg;
  }
  EXPECT_THROW(decode_request("{\"id\": 1}"), FormatError);
  EXPECT_THROW(decode_request("[1,2]"), FormatError);
  EXPECT_THROW(decode_request("nonsense"), FormatError);
}

TEST(Response, RoundTripAndValidation) {
  Response r;
  r.id = 9;
  r.label = 2;
  r.scores = std::vector<double>{0.1, 0.2, 0.7};
  const Response back = decode_response(encode_response(r));
  EXPECT_EQ(back.id, 9u);
  EXPECT_EQ(back.label, 2);
  EXPECT_EQ(back.scores, r.scores);
  EXPECT_FALSE(back.error);

  Response e;
  e.id = 4;
  e.error = "bad";
  EXPECT_EQ(decode_response(encode_response(e)).error, "bad");
  EXPECT_THROW(decode_response("{\"id\":1,\"label\":\"x\"}"), FormatError);
  EXPECT_THROW(decode_response("{\"id\":-1,\"label\":1}"), FormatError);
  EXPECT_FALSE(decode_response("{\"id\":1,\"label\":1}").scores);
}

TEST(ExternalPredictor, FixedLabelFixture) {
  ExternalPredictor p(fixture({"--label", "3"}));
  const Prediction pred = p.predict(Image::filled(Shape{4, 4, 3}, 0.2));
  EXPECT_EQ(pred.label, 3);
  ASSERT_TRUE(pred.scores);
  EXPECT_EQ((*pred.scores)[3], 1.0);
}

TEST(ExternalPredictor, HundredSequentialRequestsStayInOrder) {
  ExternalPredictor p(fixture({"--mean-threshold", "0.5", "--classes", "2", "--chatty"}));
  for (int i = 0; i < 100; ++i) {
    const double v = (i % 2) ? 0.9 : 0.1;
    EXPECT_EQ(p.predict(Image::filled(Shape{2, 2, 1}, v)).label, i % 2) << i;
  }
  EXPECT_TRUE(p.alive());
}

TEST(ExternalPredictor, LabelOnlyWithoutScores) {
  ExternalPredictor p(fixture({"--label", "1", "--no-scores"}));
  const Prediction pred = p.predict(Image::filled(Shape{2, 2, 1}, 0.0));
  EXPECT_EQ(pred.label, 1);
  EXPECT_FALSE(pred.scores);
}

TEST(ExternalPredictor, MalformedLineIsTransportErrorAndKillsChild) {
  ExternalPredictor p(fixture({"--label", "0", "--malformed-after", "2"}));
  const Image img = Image::filled(Shape{2, 2, 1}, 0.0);
  EXPECT_EQ(p.predict(img).label, 0);
  EXPECT_EQ(p.predict(img).label, 0);
  EXPECT_THROW(p.predict(img), TransportError);
  EXPECT_FALSE(p.alive());
  EXPECT_THROW(p.predict(img), TransportError);
}

TEST(ExternalPredictor, ChildExitIsTransportError) {
  ExternalPredictor p(fixture({"--exit-after", "1"}));
  const Image img = Image::filled(Shape{2, 2, 1}, 0.0);
  EXPECT_NO_THROW(p.predict(img));
  EXPECT_THROW(p.predict(img), TransportError);
}

TEST(ExternalPredictor, ProtocolViolationsAreRejected) {
  const Image img = Image::filled(Shape{2, 2, 1}, 0.0);
  ExternalPredictor wrong_id(fixture({"--wrong-id"}));
  EXPECT_THROW(wrong_id.predict(img), TransportError);
  ExternalPredictor inconsistent(fixture({"--label", "2", "--inconsistent"}));
  EXPECT_THROW(inconsistent.predict(img), TransportError);
  ExternalPredictor negative(fixture({"--label", "-1", "--no-scores"}));
  EXPECT_THROW(negative.predict(img), TransportError);
}

TEST(ExternalPredictor, SpawnFailureIsTransportError) {
  EXPECT_THROW(ExternalPredictor({"/nonexistent/predictor-binary"}), TransportError);
}

TEST(MakePredictor, ParsesSpecs) {
  EXPECT_THROW(make_predictor("onnx:model"), ParameterError);
  EXPECT_THROW(make_predictor("builtin:"), ParameterError);
  EXPECT_THROW(make_predictor("exec:   "), ParameterError);
  EXPECT_THROW(make_predictor("builtin:/nonexistent.rff"), IoError);
  auto p = make_predictor(std::string("exec:") + RECESS_FIXTURE_PREDICTOR + " --label 4");
  EXPECT_EQ(p->predict(Image::filled(Shape{2, 2, 1}, 0.3)).label, 4);
  EXPECT_FALSE(p->concurrent());
}
