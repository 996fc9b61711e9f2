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

#include <cstdlib>
#include <json.hpp>
#include <sstream>

#include "recess/cli.hpp"
#include "recess/dataset_io.hpp"
#include "recess/filters.hpp"
#include "recess/model.hpp"
#include "recess/report.hpp"
#include "test_util.hpp"

using namespace recess;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return CliRun{code, out.str(), err.str()};
}

std::string golden_input() { return testutil::data_file("golden_input.png").string(); }

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"filter", "--input", "a.png"}).code, 2);  // missing --output
  EXPECT_EQ(run({"bench", "--reps", "many"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliFilter, AlphaOutOfRangeExitsTwo) {
  testutil::TempDir dir;
  for (const char* alpha : {"1.5", "0", "-0.2"}) {
    const CliRun r = run({"filter", "--input", golden_input(), "--output",
                       (dir / "o.png").string(), "--alpha", alpha});
    EXPECT_EQ(r.code, 2) << alpha;
    EXPECT_FALSE(r.err.empty());
  }
}

TEST(CliFilter, MissingInputExitsOne) {
  testutil::TempDir dir;
  const CliRun r = run({"filter", "--input", (dir / "none.png").string(), "--output",
                     (dir / "o.png").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("none.png"), std::string::npos);
}

TEST(CliFilter, AlphaOneRoundTripsWithinOneLevel) {
  testutil::TempDir dir;
  ASSERT_EQ(run({"filter", "--input", golden_input(), "--output", (dir / "o.png").string(),
                 "--alpha", "1.0"})
                .code,
            0);
  EXPECT_LE(max_abs_diff(load_png(dir / "o.png"), load_png(golden_input())), 1.0 / 255.0);
}

TEST(CliFilter, HalfAlphaMatchesFrozenGolden) {
  testutil::TempDir dir;
  ASSERT_EQ(run({"filter", "--input", golden_input(), "--output", (dir / "o.png").string(),
                 "--alpha", "0.5"})
                .code,
            0);
  EXPECT_EQ(load_png(dir / "o.png"), load_png(testutil::data_file("golden_alpha05.png")));
}

TEST(CliFilter, ConfigFileAndFlagPrecedence) {
  testutil::TempDir dir;
  {
    std::ofstream cfg(dir / "run.toml");
    cfg << "[filter]\nalpha = 0.5\n";
  }
  ASSERT_EQ(run({"--config", (dir / "run.toml").string(), "filter", "--input", golden_input(),
                 "--output", (dir / "cfg.png").string()})
                .code,
            0);
  EXPECT_EQ(load_png(dir / "cfg.png"), load_png(testutil::data_file("golden_alpha05.png")));
  // An explicit flag wins over the file.
  ASSERT_EQ(run({"--config", (dir / "run.toml").string(), "filter", "--input", golden_input(),
                 "--output", (dir / "flag.png").string(), "--alpha", "1.0"})
                .code,
            0);
  EXPECT_LE(max_abs_diff(load_png(dir / "flag.png"), load_png(golden_input())), 1.0 / 255.0);
}

TEST(CliDetect, ConstantImageIsBenign) {
  testutil::TempDir dir;
  save_png(Image::filled(Shape{32, 32, 3}, 0.4), dir / "flat.png");
  auto model = BuiltinModel::zeros(Shape{32, 32, 3}, 4, 2);
  model.hidden_weights.assign(model.hidden_weights.size(), 0.01);
  model.output_weights = {1, -1, 0.5, 0, -1, 1, 0, 0.5};
  save_model(model, dir / "m.rff");
  const CliRun r = run({"detect", "--predictor", "builtin:" + (dir / "m.rff").string(), "--input",
                     (dir / "flat.png").string(), "--alpha", "0.6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["decision"], "benign");
  EXPECT_EQ(j["original_label"], j["filtered_label"]);
  EXPECT_EQ(j["alpha"], 0.6);
}

TEST(CliDetect, ExternalPredictorFailureExitsOne) {
  testutil::TempDir dir;
  save_png(Image::filled(Shape{8, 8, 1}, 0.4), dir / "flat.png");
  const CliRun r = run({"detect", "--predictor",
                     std::string("exec:") + RECESS_FIXTURE_PREDICTOR + " --malformed-after 0",
                     "--input", (dir / "flat.png").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("malformed"), std::string::npos) << r.err;
}

TEST(CliEval, EmptyAdversarialDirExitsOne) {
  testutil::TempDir dir;
  std::filesystem::create_directories(dir / "adv");
  std::filesystem::create_directories(dir / "benign");
  save_png(Image::filled(Shape{8, 8, 1}, 0.4), dir / "benign" / "a.png");
  const std::string predictor = std::string("exec:") + RECESS_FIXTURE_PREDICTOR;
  CliRun r = run({"eval", "--predictor", predictor, "--benign-dir", (dir / "benign").string(),
               "--adv-dir", (dir / "adv").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("no successful adversarial examples"), std::string::npos) << r.err;

  // A manifest listing only failed attacks counts as empty too.
  save_png(Image::filled(Shape{8, 8, 1}, 0.4), dir / "adv" / "x.png");
  std::ofstream(dir / "adv" / "manifest.jsonl") << R"({"path":"x.png","success":false})" << "\n";
  r = run({"eval", "--predictor", predictor, "--benign-dir", (dir / "benign").string(),
           "--adv-dir", (dir / "adv").string()});
  EXPECT_EQ(r.code, 1);
}

TEST(CliEval, SeveralAdversarialDirsAddCombinedGroup) {
  testutil::TempDir dir;
  for (const char* method : {"fgsm", "cw"}) {
    std::filesystem::create_directories(dir / method);
    save_png(Image::filled(Shape{8, 8, 1}, 0.3), dir / method / "x.png");
    std::ofstream(dir / method / "manifest.jsonl")
        << R"({"path":"x.png","success":true,"method":")" << method << "\"}\n";
  }
  std::filesystem::create_directories(dir / "benign");
  save_png(Image::filled(Shape{8, 8, 1}, 0.4), dir / "benign" / "a.png");
  const CliRun r = run({"eval", "--predictor", std::string("exec:") + RECESS_FIXTURE_PREDICTOR,
                        "--benign-dir", (dir / "benign").string(), "--adv-dir",
                        (dir / "fgsm").string(), "--adv-dir", (dir / "cw").string(), "--alphas",
                        "0.9", "--report", (dir / "r.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<std::pair<std::string, int>> groups;
  for (const auto& row : read_json_lines(dir / "r.jsonl")) {
    if (row["record"] == "alpha") groups.emplace_back(row["attack"], row["n_adversarial"]);
  }
  const std::vector<std::pair<std::string, int>> expected{{"fgsm+cw", 2}, {"fgsm", 1}, {"cw", 1}};
  EXPECT_EQ(groups, expected);
}

TEST(CliBench, SeedFromEnvironment) {
  CliRun r = run({"bench", "--reps", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["seed"], 42);
  ::setenv("RECESS_SEED", "7", 1);
  r = run({"bench", "--reps", "10"});
  const CliRun flag = run({"bench", "--reps", "10", "--seed", "9"});
  ::unsetenv("RECESS_SEED");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["seed"], 7);
  EXPECT_EQ(nlohmann::json::parse(flag.out)["seed"], 9);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["shape"], "32x32x3");
  EXPECT_GT(j["operation_count"].get<std::uint64_t>(), 0u);
}

// Small end-to-end pipeline, run twice; every artifact must repeat exactly.
TEST(CliPipeline, DeterministicAcrossRuns) {
  std::vector<std::string> reports;
  for (int round = 0; round < 2; ++round) {
    testutil::TempDir dir;
    auto p = [&](const char* name) { return (dir / name).string(); };
    ASSERT_EQ(run({"synth", "--out-dir", p("data"), "--train-count", "400", "--test-count",
                   "120"})
                  .code,
              0);
    CliRun t = run({"train", "--cifar-dir", p("data"), "--classes", "0,1", "--epochs", "3",
                 "--hidden", "16", "--train-limit", "80", "--test-limit", "20", "--out",
                 p("m.rff")});
    ASSERT_EQ(t.code, 0) << t.err;
    const std::string test_batch = p("data") + "/test_batch.bin";
    ASSERT_EQ(run({"export", "--in-dataset", test_batch, "--limit", "20", "--out-dir",
                   p("benign")})
                  .code,
              0);
    CliRun a = run({"attack", "--model", p("m.rff"), "--in-dataset", test_batch, "--limit", "20",
                 "--out-dir", p("fgsm")});
    ASSERT_EQ(a.code, 0) << a.err;
    CliRun c = run({"attack", "--model", p("m.rff"), "--method", "cw", "--steps", "30",
                 "--in-dataset", test_batch, "--limit", "10", "--out-dir", p("cw")});
    ASSERT_EQ(c.code, 0) << c.err;
    CliRun e = run({"eval", "--predictor", "builtin:" + p("m.rff"), "--benign-dir", p("benign"),
                 "--adv-dir", p("fgsm"), "--alphas", "0.9,0.5", "--report", p("eval.jsonl")});
    CliRun n = run({"noise", "--predictor", "builtin:" + p("m.rff"), "--input-dir", p("benign"),
                 "--alphas", "0.9", "--report", p("noise.jsonl")});
    ASSERT_EQ(n.code, 0) << n.err;
    std::string combined = t.out + a.out + c.out +
                           testutil::read_text(dir / "fgsm" / "manifest.jsonl") +
                           testutil::read_text(dir / "cw" / "manifest.jsonl") +
                           testutil::read_text(dir / "noise.jsonl");
    if (e.code == 0) combined += testutil::read_text(dir / "eval.jsonl");
    else combined += "eval:" + std::to_string(e.code) + e.err;
    // Outputs echo paths; only the temp directory itself may differ.
    const std::string root = dir.path().string();
    for (std::size_t at = combined.find(root); at != std::string::npos;
         at = combined.find(root, at)) {
      combined.replace(at, root.size(), "<dir>");
    }
    reports.push_back(combined);

    const auto noise_rows = read_json_lines(dir / "noise.jsonl");
    ASSERT_EQ(noise_rows.size(), 3u);
    for (const auto& row : noise_rows) {
      EXPECT_TRUE(row.contains("seed"));
      EXPECT_TRUE(row.contains("alpha"));
      EXPECT_EQ(row["images"], 20);
    }
  }
  EXPECT_EQ(reports[0], reports[1]);
}
