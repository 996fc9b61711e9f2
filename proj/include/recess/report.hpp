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

#ifndef RECESS_REPORT_HPP_
#define RECESS_REPORT_HPP_

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "recess/image.hpp"
#include "recess/metrics.hpp"

namespace recess {

// Key order is kept as inserted so reports diff cleanly between runs.
using Json = nlohmann::ordered_json;

// One JSON object per line, '\n' terminated, compact form.
class JsonLinesWriter {
 public:
  explicit JsonLinesWriter(const std::filesystem::path& path);
  void write(const Json& row);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::vector<Json> read_json_lines(const std::filesystem::path& path);

inline constexpr const char* kManifestName = "manifest.jsonl";

// A PNG image plus its manifest row (empty object when the directory has no
// manifest).
struct ImageRecord {
  std::filesystem::path path;
  Image image;
  Json meta;
};

// Loads a dataset directory. With a manifest.jsonl the rows are taken in
// manifest order and `successful_only` drops rows whose "success" is false;
// without one every *.png is loaded in file-name order.
std::vector<ImageRecord> load_image_dir(const std::filesystem::path& dir,
                                        bool successful_only);

// Fixed-width "alpha  TPR  TNR" table with two-decimal percentages.
std::string rates_table(const AlphaSweep& sweep);

Json counts_json(const ConfusionCounts& counts);
// [[fpr, tpr, alpha-or-null], ...]
Json roc_points_json(const RocCurve& curve);

}  // namespace recess

#endif  // RECESS_REPORT_HPP_
