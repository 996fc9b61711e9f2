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

#include "recess/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "recess/dataset_io.hpp"
#include "recess/error.hpp"

namespace recess {

JsonLinesWriter::JsonLinesWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::trunc) {
  if (!out_) throw IoError("cannot open '" + path.string() + "' for writing");
}

void JsonLinesWriter::write(const Json& row) {
  out_ << row.dump() << '\n';
  if (!out_) throw IoError("write failure on '" + path_.string() + "'");
}

void JsonLinesWriter::close() {
  out_.close();
  if (!out_) throw IoError("write failure on '" + path_.string() + "'");
}

std::vector<Json> read_json_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<Json> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw FormatError(path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
    if (!rows.back().is_object()) {
      throw FormatError(path.string() + ":" + std::to_string(number) +
                        ": expected a JSON object");
    }
  }
  return rows;
}

std::vector<ImageRecord> load_image_dir(const std::filesystem::path& dir,
                                        bool successful_only) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
  std::vector<ImageRecord> records;
  const fs::path manifest = dir / kManifestName;
  if (fs::exists(manifest)) {
    for (Json& row : read_json_lines(manifest)) {
      if (!row.contains("path") || !row["path"].is_string()) {
        throw FormatError(manifest.string() + ": row without a \"path\" string");
      }
      if (successful_only && row.contains("success") && !row["success"].get<bool>()) {
        continue;
      }
      const fs::path path = dir / row["path"].get<std::string>();
      records.push_back(ImageRecord{path, load_png(path), std::move(row)});
    }
    return records;
  }
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    records.push_back(ImageRecord{path, load_png(path), Json::object()});
  }
  return records;
}

std::string rates_table(const AlphaSweep& sweep) {
  std::ostringstream out;
  out << "alpha     TPR       TNR\n";
  for (const auto& row : sweep.rows) {
    char alpha[16];
    std::snprintf(alpha, sizeof alpha, "%-9.2f", row.alpha);
    char line[64];
    std::snprintf(line, sizeof line, "%s %-9s %s\n", alpha,
                  format_percent(row.rates.tpr).c_str(),
                  format_percent(row.rates.tnr).c_str());
    out << line;
  }
  char tail[48];
  std::snprintf(tail, sizeof tail, "AUC %.4f\n", auc(sweep.curve));
  out << tail;
  return out.str();
}

Json counts_json(const ConfusionCounts& counts) {
  Json j;
  j["tp"] = counts.tp;
  j["fn"] = counts.fn;
  j["tn"] = counts.tn;
  j["fp"] = counts.fp;
  return j;
}

Json roc_points_json(const RocCurve& curve) {
  Json points = Json::array();
  for (const auto& p : curve.points) {
    Json alpha = p.alpha ? Json(*p.alpha) : Json(nullptr);
    points.push_back(Json::array({p.fpr, p.tpr, alpha}));
  }
  return points;
}

}  // namespace recess
