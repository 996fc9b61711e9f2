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

#include "recess/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "recess/attacks.hpp"
#include "recess/dataset_io.hpp"
#include "recess/detector.hpp"
#include "recess/error.hpp"
#include "recess/filters.hpp"
#include "recess/metrics.hpp"
#include "recess/model.hpp"
#include "recess/predictor.hpp"
#include "recess/report.hpp"
#include "recess/synthetic.hpp"

namespace recess {
namespace {

namespace fs = std::filesystem;

constexpr const char* kDefaultAlphas = "0.95,0.9,0.85,0.8,0.75,0.7,0.65,0.6,0.55,0.5";

// ---------------------------------------------------------------- parsing

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) {
    const auto first = part.find_first_not_of(" \t");
    const auto last = part.find_last_not_of(" \t");
    if (first == std::string::npos) continue;
    parts.push_back(part.substr(first, last - first + 1));
  }
  return parts;
}

double parse_real(const std::string& text, const std::string& what) {
  // Accepts plain decimals and fractions such as "8/255".
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return parse_real(text.substr(0, slash), what) /
           parse_real(text.substr(slash + 1), what);
  }
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParameterError(what + ": '" + text + "' is not a number");
  }
  return value;
}

long long parse_integer(const std::string& text, const std::string& what) {
  long long value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParameterError(what + ": '" + text + "' is not an integer");
  }
  return value;
}

std::vector<double> parse_reals(const std::string& text, const std::string& what) {
  std::vector<double> values;
  for (const auto& part : split(text, ',')) values.push_back(parse_real(part, what));
  if (values.empty()) throw ParameterError(what + " is empty");
  return values;
}

std::vector<int> parse_classes(const std::string& text) {
  std::vector<int> classes;
  for (const auto& part : split(text, ',')) {
    classes.push_back(static_cast<int>(parse_integer(part, "--classes")));
  }
  if (classes.empty()) throw ParameterError("--classes is empty");
  return classes;
}

std::vector<double> parse_alphas(const std::string& text) {
  std::vector<double> alphas = parse_reals(text, "--alphas");
  for (double a : alphas) (void)FilterSpec(a);
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    if (!(alphas[i] < alphas[i - 1])) {
      throw ParameterError("--alphas must be strictly descending");
    }
  }
  return alphas;
}

// splitmix64 finaliser over a combined key; used to give every (stream, item)
// pair its own generator seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t item) {
  std::uint64_t z = seed ^ (stream * 0x9E3779B97F4A7C15ULL) ^ (item * 0xD1B54A32D192ED03ULL);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------- helpers

template <typename Body>
void parallel_for(std::size_t n, bool parallel, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<fs::path> train_batches(const fs::path& dir) {
  std::vector<fs::path> paths;
  if (!fs::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("data_batch_", 0) == 0 && entry.path().extension() == ".bin") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw IoError("no data_batch_*.bin files in '" + dir.string() + "'");
  return paths;
}

std::vector<Image> images_of(const std::vector<ImageRecord>& records) {
  std::vector<Image> images;
  images.reserve(records.size());
  for (const auto& r : records) images.push_back(r.image);
  return images;
}

std::string image_name(const char* prefix, std::size_t index) {
  char name[64];
  std::snprintf(name, sizeof name, "%s_%05zu.png", prefix, index);
  return name;
}

Json classes_json(const std::vector<int>& classes) {
  Json j = Json::array();
  for (int c : classes) j.push_back(c);
  return j;
}

// ---------------------------------------------------------------- commands

struct FilterOptions {
  std::string input;
  std::string output;
  double alpha = 0.8;
};

int cmd_filter(const FilterOptions& o, std::ostream& out) {
  const FilterSpec spec(o.alpha);
  const Image image = load_png(o.input);
  save_png(feature_filter(image, spec), o.output);
  out << "filtered " << o.input << " -> " << o.output << " (alpha " << o.alpha << ", kept "
      << spec.kept_rows(image.shape().height) << "x" << spec.kept_cols(image.shape().width)
      << ")\n";
  return 0;
}

struct SynthOptions {
  std::string out_dir;
  std::size_t train_count = 10000;
  std::size_t test_count = 2000;
  int num_classes = 10;
  std::uint64_t seed = 42;
  std::uint64_t template_seed = 2024;
  double template_strength = SynthConfig{}.template_strength;
  double texture_strength = SynthConfig{}.texture_strength;
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  fs::create_directories(o.out_dir);
  SynthConfig config;
  config.num_classes = o.num_classes;
  config.template_seed = o.template_seed;
  config.template_strength = o.template_strength;
  config.texture_strength = o.texture_strength;

  config.count = o.train_count;
  config.seed = derive_seed(o.seed, 1, 0);
  save_cifar10(synthesize_dataset(config), fs::path(o.out_dir) / "data_batch_1.bin");
  config.count = o.test_count;
  config.seed = derive_seed(o.seed, 2, 0);
  save_cifar10(synthesize_dataset(config), fs::path(o.out_dir) / "test_batch.bin");
  out << "wrote " << o.train_count << " training and " << o.test_count
      << " test records to " << o.out_dir << "\n";
  return 0;
}

struct TrainOptions {
  std::string cifar_dir;
  std::string classes = "0,1";
  std::size_t train_limit = 2000;
  std::size_t test_limit = 400;
  std::size_t epochs = 30;
  std::size_t hidden = 256;
  std::size_t batch_size = 32;
  double learning_rate = 0.01;
  std::uint64_t seed = 42;
  std::string out;
};

int cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& err) {
  const std::vector<int> classes = parse_classes(o.classes);
  const LabeledDataset train =
      load_cifar10_classes(train_batches(o.cifar_dir), classes, o.train_limit);
  if (train.size() == 0) throw IoError("no training records for the requested classes");

  TrainConfig config;
  config.hidden_size = o.hidden;
  config.epochs = o.epochs;
  config.batch_size = o.batch_size;
  config.learning_rate = o.learning_rate;
  config.seed = o.seed;
  const BuiltinModel model = train_builtin(train, config, [&](const EpochStats& s) {
    err << "epoch " << s.epoch << " loss " << s.mean_loss << " train accuracy "
        << format_percent(s.train_accuracy) << "\n";
  });
  save_model(model, o.out);

  Json summary;
  summary["record"] = "train";
  summary["model"] = o.out;
  summary["classes"] = classes_json(classes);
  summary["train_size"] = train.size();
  summary["hidden"] = o.hidden;
  summary["epochs"] = o.epochs;
  summary["batch_size"] = o.batch_size;
  summary["learning_rate"] = o.learning_rate;
  summary["seed"] = o.seed;
  summary["train_accuracy"] = accuracy(model, train);
  const fs::path test_path = fs::path(o.cifar_dir) / "test_batch.bin";
  if (fs::exists(test_path) && o.test_limit > 0) {
    const LabeledDataset test = load_cifar10_classes({test_path}, classes, o.test_limit);
    summary["test_size"] = test.size();
    summary["test_accuracy"] = test.size() > 0 ? Json(accuracy(model, test)) : Json(nullptr);
  }
  out << summary.dump() << "\n";
  return 0;
}

struct ExportOptions {
  std::string in_dataset;
  std::string classes = "0,1";
  std::size_t limit = 400;
  std::string out_dir;
};

int cmd_export(const ExportOptions& o, std::ostream& out) {
  const std::vector<int> classes = parse_classes(o.classes);
  const LabeledDataset data = load_cifar10_classes({o.in_dataset}, classes, o.limit);
  fs::create_directories(o.out_dir);
  JsonLinesWriter manifest(fs::path(o.out_dir) / kManifestName);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::string name = image_name("img", i);
    save_png(data.images[i], fs::path(o.out_dir) / name);
    Json row;
    row["path"] = name;
    row["index"] = i;
    row["label"] = data.labels[i];
    manifest.write(row);
  }
  manifest.close();
  out << "exported " << data.size() << " images to " << o.out_dir << "\n";
  return 0;
}

struct AttackOptions {
  std::string model;
  std::string method = "fgsm";
  std::string eps = "8/255";
  double c = 1.0;
  double k = 0.0;
  std::size_t steps = 1000;
  double step_size = 0.01;
  std::string in_dataset;
  std::string classes = "0,1";
  std::size_t limit = 400;
  std::string out_dir;
  std::uint64_t seed = 42;
};

int cmd_attack(const AttackOptions& o, std::ostream& out) {
  if (o.method != "fgsm" && o.method != "cw") {
    throw ParameterError("--method must be fgsm or cw, got '" + o.method + "'");
  }
  const double epsilon = parse_real(o.eps, "--eps");
  if (epsilon < 0.0) throw ParameterError("--eps must be non-negative");
  CwConfig cw;
  cw.c = o.c;
  cw.confidence = o.k;
  cw.steps = o.steps;
  cw.step_size = o.step_size;

  const BuiltinModel model = load_model(o.model);
  const std::vector<int> classes = parse_classes(o.classes);
  const LabeledDataset data = load_cifar10_classes({o.in_dataset}, classes, o.limit);
  if (model.input_shape != Shape{32, 32, 3} || model.classes != classes.size()) {
    throw ContractError("model expects " + model.input_shape.to_string() + " with " +
                        std::to_string(model.classes) + " classes; dataset has " +
                        std::to_string(classes.size()) + " classes");
  }

  struct Outcome {
    bool attempted = false;
    int clean_label = 0;
    std::optional<AttackResult> result;
    std::optional<Image> stored;
    int stored_label = 0;
  };
  std::vector<Outcome> outcomes(data.size());
  parallel_for(data.size(), true, [&](std::size_t i) {
    Outcome& oc = outcomes[i];
    const Image& clean = data.images[i];
    oc.clean_label = argmax(logits(model, clean));
    // Only correctly classified images are attacked.
    if (oc.clean_label != data.labels[i]) return;
    oc.attempted = true;
    if (o.method == "fgsm") {
      oc.result = fgsm(model, clean, data.labels[i], epsilon);
    } else {
      oc.result = cw_l2(model, clean, runner_up_target(model, clean), cw);
    }
    // Success is judged on what actually lands on disk.
    oc.stored = quantize(oc.result->adversarial);
    oc.stored_label = argmax(logits(model, *oc.stored));
  });

  Json params;
  if (o.method == "fgsm") {
    params["eps"] = epsilon;
  } else {
    params["c"] = o.c;
    params["k"] = o.k;
    params["steps"] = o.steps;
    params["step_size"] = o.step_size;
  }

  fs::create_directories(o.out_dir);
  JsonLinesWriter manifest(fs::path(o.out_dir) / kManifestName);
  std::size_t attempted = 0;
  std::size_t successes = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Outcome& oc = outcomes[i];
    if (!oc.attempted) continue;
    ++attempted;
    const bool success = oc.stored_label != oc.clean_label;
    if (success) ++successes;
    const std::string name = image_name("adv", i);
    save_png(*oc.stored, fs::path(o.out_dir) / name);
    Json row;
    row["path"] = name;
    row["index"] = i;
    row["true_label"] = data.labels[i];
    row["clean_label"] = oc.clean_label;
    row["adversarial_label"] = oc.result->adversarial_label;
    row["stored_label"] = oc.stored_label;
    row["l2"] = l2_distance(*oc.stored, data.images[i]);
    row["iterations"] = oc.result->iterations_used;
    row["success"] = success;
    row["method"] = o.method;
    row["params"] = params;
    row["seed"] = o.seed;
    manifest.write(row);
  }
  manifest.close();

  Json summary;
  summary["record"] = "attack";
  summary["method"] = o.method;
  summary["params"] = params;
  summary["images"] = data.size();
  summary["attempted"] = attempted;
  summary["successful"] = successes;
  summary["seed"] = o.seed;
  out << summary.dump() << "\n";
  return 0;
}

struct DetectOptions {
  std::string predictor;
  double alpha = 0.8;
  std::string input;
};

int cmd_detect(const DetectOptions& o, std::ostream& out) {
  const FilterSpec spec(o.alpha);
  auto predictor = make_predictor(o.predictor);
  const Verdict v = detect(load_png(o.input), *predictor, spec);
  Json j;
  j["decision"] = to_string(v.decision);
  j["original_label"] = v.original_label;
  j["filtered_label"] = v.filtered_label;
  j["alpha"] = o.alpha;
  j["input"] = o.input;
  out << j.dump() << "\n";
  return 0;
}

struct EvalOptions {
  std::string predictor;
  std::string alphas = kDefaultAlphas;
  std::string benign_dir;
  std::vector<std::string> adv_dirs;
  std::string report;
  bool baselines = false;
  std::uint64_t seed = 42;
};

struct Baseline {
  std::string approach;
  std::string parameter;
  Transform transform;
};

std::vector<Baseline> baseline_transforms() {
  std::vector<Baseline> out;
  for (int bits = 1; bits <= 5; ++bits) {
    out.push_back({"bit_depth", std::to_string(bits) + "-bit",
                   [bits](const Image& x) { return bit_depth_reduce(x, bits); }});
  }
  for (std::size_t k = 2; k <= 4; ++k) {
    out.push_back({"median", std::to_string(k) + "x" + std::to_string(k),
                   [k](const Image& x) { return median_smooth(x, k); }});
  }
  for (const auto& [search, patch, h] :
       std::vector<std::tuple<std::size_t, std::size_t, int>>{
           {11, 3, 2}, {11, 3, 4}, {13, 3, 2}, {13, 3, 4}}) {
    // Strength is quoted on the 0..255 scale; pixels here are in [0,1].
    const double strength = h / 255.0;
    out.push_back({"non_local_mean",
                   std::to_string(search) + "-" + std::to_string(patch) + "-" +
                       std::to_string(h),
                   [search, patch, strength](const Image& x) {
                     return non_local_mean(x, search, patch, strength);
                   }});
  }
  for (int degrees : {-20, -10, 10, 20}) {
    out.push_back({"rotation", std::to_string(degrees),
                   [degrees](const Image& x) { return rotate(x, degrees); }});
  }
  return out;
}

// Attack groups in order of first appearance in the manifest.
std::vector<std::pair<std::string, std::vector<std::size_t>>> attack_groups(
    const std::vector<ImageRecord>& records) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Json& meta = records[i].meta;
    const std::string method = meta.contains("method") && meta["method"].is_string()
                                   ? meta["method"].get<std::string>()
                                   : "unknown";
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == method; });
    if (it == groups.end()) {
      groups.push_back({method, {}});
      it = groups.end() - 1;
    }
    it->second.push_back(i);
  }
  return groups;
}

std::vector<Verdict> subset(const std::vector<Verdict>& all,
                            const std::vector<std::size_t>& indices) {
  std::vector<Verdict> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(all[i]);
  return out;
}

int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  const std::vector<double> alphas = parse_alphas(o.alphas);
  auto predictor = make_predictor(o.predictor);
  std::vector<ImageRecord> adv_records;
  for (const auto& dir : o.adv_dirs) {
    auto records = load_image_dir(dir, true);
    std::move(records.begin(), records.end(), std::back_inserter(adv_records));
  }
  if (adv_records.empty()) {
    std::string dirs;
    for (const auto& dir : o.adv_dirs) dirs += (dirs.empty() ? "'" : ", '") + dir + "'";
    throw IoError("no successful adversarial examples in " + dirs);
  }
  const auto benign_records = load_image_dir(o.benign_dir, false);
  if (benign_records.empty()) throw IoError("no benign images in '" + o.benign_dir + "'");
  const std::vector<Image> adversarial = images_of(adv_records);
  const std::vector<Image> benign = images_of(benign_records);

  auto groups = attack_groups(adv_records);
  std::string combined_name;
  for (const auto& g : groups) combined_name += (combined_name.empty() ? "" : "+") + g.first;
  if (groups.size() > 1) {
    std::vector<std::size_t> all(adversarial.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    groups.insert(groups.begin(), {combined_name, all});
  }

  std::optional<JsonLinesWriter> report;
  if (!o.report.empty()) report.emplace(o.report);

  // One sweep per attack group, sharing the verdicts.
  std::vector<AlphaSweep> sweeps(groups.size());
  for (double alpha : alphas) {
    const FilterSpec spec(alpha);
    const auto on_adv = batch_detect(adversarial, *predictor, spec);
    const auto on_benign = batch_detect(benign, *predictor, spec);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto rates = tpr_tnr(subset(on_adv, groups[g].second), on_benign);
      sweeps[g].rows.push_back(AlphaSweepRow{alpha, rates});
    }
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<RocPoint> interior;
    for (const auto& row : sweeps[g].rows) {
      interior.push_back(RocPoint{1.0 - row.rates.tnr, row.rates.tpr, row.alpha});
    }
    sweeps[g].curve = make_roc_curve(std::move(interior));

    out << "feature filter, attack " << groups[g].first << " ("
        << groups[g].second.size() << " adversarial, " << benign.size() << " benign)\n"
        << rates_table(sweeps[g]) << "\n";
    if (report) {
      for (const auto& row : sweeps[g].rows) {
        Json j;
        j["record"] = "alpha";
        j["approach"] = "feature_filter";
        j["alpha"] = row.alpha;
        j["attack"] = groups[g].first;
        j["seed"] = o.seed;
        j["tpr"] = row.rates.tpr;
        j["tnr"] = row.rates.tnr;
        j["counts"] = counts_json(row.rates.counts);
        j["n_adversarial"] = groups[g].second.size();
        j["n_benign"] = benign.size();
        report->write(j);
      }
      Json roc;
      roc["record"] = "roc";
      roc["approach"] = "feature_filter";
      roc["alphas"] = alphas;
      roc["attack"] = groups[g].first;
      roc["seed"] = o.seed;
      roc["points"] = roc_points_json(sweeps[g].curve);
      roc["auc"] = auc(sweeps[g].curve);
      report->write(roc);
    }
  }

  if (o.baselines) {
    out << "baseline transforms, attack " << combined_name << "\n"
        << "approach         parameter  TPR       TNR\n";
    std::map<std::string, std::vector<RocPoint>> by_approach;
    std::vector<std::string> order;
    for (const auto& b : baseline_transforms()) {
      err << "baseline " << b.approach << " " << b.parameter << "\n";
      const auto on_adv = batch_detect_with(adversarial, *predictor, b.transform);
      const auto on_benign = batch_detect_with(benign, *predictor, b.transform);
      const DetectionRates rates = tpr_tnr(on_adv, on_benign);
      if (!by_approach.count(b.approach)) order.push_back(b.approach);
      by_approach[b.approach].push_back(RocPoint{1.0 - rates.tnr, rates.tpr, std::nullopt});
      char line[96];
      std::snprintf(line, sizeof line, "%-16s %-10s %-9s %s\n", b.approach.c_str(),
                    b.parameter.c_str(), format_percent(rates.tpr).c_str(),
                    format_percent(rates.tnr).c_str());
      out << line;
      if (report) {
        Json j;
        j["record"] = "baseline";
        j["approach"] = b.approach;
        j["parameter"] = b.parameter;
        j["attack"] = combined_name;
        j["seed"] = o.seed;
        j["tpr"] = rates.tpr;
        j["tnr"] = rates.tnr;
        j["counts"] = counts_json(rates.counts);
        report->write(j);
      }
    }
    for (const auto& approach : order) {
      const RocCurve curve = make_roc_curve(by_approach[approach]);
      char line[96];
      std::snprintf(line, sizeof line, "AUC %-16s %.4f\n", approach.c_str(), auc(curve));
      out << line;
      if (report) {
        Json j;
        j["record"] = "baseline_roc";
        j["approach"] = approach;
        j["attack"] = combined_name;
        j["seed"] = o.seed;
        j["points"] = roc_points_json(curve);
        j["auc"] = auc(curve);
        report->write(j);
      }
    }
  }
  if (report) report->close();
  return 0;
}

struct NoiseOptions {
  std::string predictor;
  std::string alphas = "0.9";
  std::string types = "gaussian,poisson,saltpepper";
  std::string params = "gaussian=0.02,poisson=255,saltpepper=0.01";
  std::string input_dir;
  std::string report;
  std::uint64_t seed = 42;
};

Image apply_noise(const std::string& type, const Image& x, double param,
                  std::uint64_t seed) {
  if (type == "gaussian") return gaussian_noise(x, param, seed);
  if (type == "poisson") return poisson_noise(x, param, seed);
  if (type == "saltpepper") return salt_pepper(x, param, seed);
  throw ParameterError("unknown noise type '" + type + "'");
}

std::vector<Prediction> predict_all(Predictor& predictor, const std::vector<Image>& images) {
  std::vector<Prediction> out(images.size());
  parallel_for(images.size(), predictor.concurrent(),
               [&](std::size_t i) { out[i] = predictor.predict(images[i]); });
  return out;
}

int cmd_noise(const NoiseOptions& o, std::ostream& out) {
  const std::vector<double> alphas = parse_alphas(o.alphas);
  const std::vector<std::string> types = split(o.types, ',');
  if (types.empty()) throw ParameterError("--types is empty");
  std::map<std::string, double> params;
  for (const auto& item : split(o.params, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("--params entries look like type=value, got '" + item + "'");
    }
    params[item.substr(0, eq)] = parse_real(item.substr(eq + 1), "--params");
  }

  auto predictor = make_predictor(o.predictor);
  const std::vector<Image> clean = images_of(load_image_dir(o.input_dir, false));
  if (clean.empty()) throw IoError("no images in '" + o.input_dir + "'");
  const std::vector<Prediction> clean_pred = predict_all(*predictor, clean);

  std::optional<JsonLinesWriter> report;
  if (!o.report.empty()) report.emplace(o.report);
  out << "noise       param      alpha  kept  top-1     top-5\n";

  for (std::size_t t = 0; t < types.size(); ++t) {
    const std::string& type = types[t];
    const auto found = params.find(type);
    if (found == params.end()) throw ParameterError("no --params value for '" + type + "'");
    const double param = found->second;

    std::vector<Image> noisy(clean.size(), clean.front());
    parallel_for(clean.size(), true, [&](std::size_t i) {
      noisy[i] = apply_noise(type, clean[i], param, derive_seed(o.seed, 100 + t, i));
    });
    const std::vector<Prediction> noisy_pred = predict_all(*predictor, noisy);
    // Noise that already flips the label is not natural-noise tolerance.
    std::vector<Image> kept;
    std::vector<Prediction> kept_pred;
    for (std::size_t i = 0; i < noisy.size(); ++i) {
      if (noisy_pred[i].label == clean_pred[i].label) {
        kept.push_back(noisy[i]);
        kept_pred.push_back(noisy_pred[i]);
      }
    }
    const std::size_t discarded = noisy.size() - kept.size();

    for (double alpha : alphas) {
      const FilterSpec spec(alpha);
      std::vector<Image> filtered(kept.size(), clean.front());
      parallel_for(kept.size(), true,
                   [&](std::size_t i) { filtered[i] = feature_filter(kept[i], spec); });
      const std::vector<Prediction> filtered_pred = predict_all(*predictor, filtered);

      std::size_t top1 = 0;
      std::size_t top5 = 0;
      bool have_top5 = !kept.empty();
      for (std::size_t i = 0; i < kept.size(); ++i) {
        if (filtered_pred[i].label == kept_pred[i].label) ++top1;
        const auto& a = kept_pred[i].scores;
        const auto& b = filtered_pred[i].scores;
        if (!a || !b || a->size() < 5) {
          have_top5 = false;
          continue;
        }
        if (topk_agreement(*a, *b, 5)) ++top5;
      }
      const double n = static_cast<double>(kept.size());
      std::optional<double> top1_rate;
      std::optional<double> top5_rate;
      if (!kept.empty()) top1_rate = top1 / n;
      if (have_top5) top5_rate = top5 / n;

      char line[128];
      std::snprintf(line, sizeof line, "%-11s %-10g %-6.2f %-5zu %-9s %s\n", type.c_str(),
                    param, alpha, kept.size(),
                    top1_rate ? format_percent(*top1_rate).c_str() : "n/a",
                    top5_rate ? format_percent(*top5_rate).c_str() : "n/a");
      out << line;
      if (report) {
        Json j;
        j["record"] = "noise";
        j["type"] = type;
        j["param"] = param;
        j["alpha"] = alpha;
        j["seed"] = o.seed;
        j["images"] = clean.size();
        j["kept"] = kept.size();
        j["discarded"] = discarded;
        j["top1_benign"] = nullptr;
        j["top5_benign"] = nullptr;
        if (top1_rate) j["top1_benign"] = top1_rate.value();
        if (top5_rate) j["top5_benign"] = top5_rate.value();
        report->write(j);
      }
    }
  }
  if (report) report->close();
  return 0;
}

struct BenchOptions {
  std::string shape = "32x32x3";
  std::size_t reps = 100;
  double alpha = 0.8;
  std::string predictor;
  std::uint64_t seed = 42;
};

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  const Shape shape = parse_shape(o.shape);
  std::unique_ptr<Predictor> predictor;
  if (!o.predictor.empty()) predictor = make_predictor(o.predictor);
  const BenchResult r = bench_filter(shape, o.reps, o.alpha, o.seed, predictor.get());
  Json j;
  j["record"] = "bench";
  j["shape"] = shape.to_string();
  j["alpha"] = o.alpha;
  j["repetitions"] = r.repetitions;
  j["seed"] = o.seed;
  j["with_predictor"] = predictor != nullptr;
  j["mean_seconds"] = r.mean_seconds;
  j["p95_seconds"] = r.p95_seconds;
  j["operation_count"] = r.operation_count;
  out << j.dump() << "\n";
  return 0;
}

void add_seed(CLI::App* cmd, std::uint64_t& seed) {
  cmd->add_option("--seed", seed, "random seed")->envname("RECESS_SEED")->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frequency-domain adversarial example detection", "recess"};
  app.set_config("--config", "", "INI/TOML file of option defaults");
  app.require_subcommand(1);

  FilterOptions filter_o;
  auto* filter = app.add_subcommand("filter", "Low-pass one PNG through the DCT filter");
  filter->add_option("--input", filter_o.input)->required();
  filter->add_option("--output", filter_o.output)->required();
  filter->add_option("--alpha", filter_o.alpha, "feature reservation ratio in (0,1]")
      ->capture_default_str();

  SynthOptions synth_o;
  auto* synth = app.add_subcommand("synth", "Write a synthetic CIFAR-format dataset");
  synth->add_option("--out-dir", synth_o.out_dir)->required();
  synth->add_option("--train-count", synth_o.train_count)->capture_default_str();
  synth->add_option("--test-count", synth_o.test_count)->capture_default_str();
  synth->add_option("--num-classes", synth_o.num_classes)->capture_default_str();
  synth->add_option("--template-seed", synth_o.template_seed)->capture_default_str();
  synth->add_option("--template-strength", synth_o.template_strength)->capture_default_str();
  synth->add_option("--texture-strength", synth_o.texture_strength)->capture_default_str();
  add_seed(synth, synth_o.seed);

  TrainOptions train_o;
  auto* train = app.add_subcommand("train", "Train the builtin classifier on CIFAR batches");
  train->add_option("--cifar-dir", train_o.cifar_dir)->required();
  train->add_option("--classes", train_o.classes, "comma-separated CIFAR labels")
      ->capture_default_str();
  train->add_option("--train-limit", train_o.train_limit)->capture_default_str();
  train->add_option("--test-limit", train_o.test_limit)->capture_default_str();
  train->add_option("--epochs", train_o.epochs)->capture_default_str();
  train->add_option("--hidden", train_o.hidden)->capture_default_str();
  train->add_option("--batch-size", train_o.batch_size)->capture_default_str();
  train->add_option("--lr", train_o.learning_rate)->capture_default_str();
  train->add_option("--out", train_o.out)->required();
  add_seed(train, train_o.seed);

  ExportOptions export_o;
  auto* exp = app.add_subcommand("export", "Write CIFAR records as PNGs with a manifest");
  exp->add_option("--in-dataset", export_o.in_dataset)->required();
  exp->add_option("--classes", export_o.classes)->capture_default_str();
  exp->add_option("--limit", export_o.limit)->capture_default_str();
  exp->add_option("--out-dir", export_o.out_dir)->required();

  AttackOptions attack_o;
  auto* attack = app.add_subcommand("attack", "Generate adversarial PNGs against a model");
  attack->add_option("--model", attack_o.model)->required();
  attack->add_option("--method", attack_o.method, "fgsm or cw")->capture_default_str();
  attack->add_option("--eps", attack_o.eps, "FGSM step, e.g. 8/255")->capture_default_str();
  attack->add_option("--c", attack_o.c)->capture_default_str();
  attack->add_option("--k", attack_o.k, "C&W confidence")->capture_default_str();
  attack->add_option("--steps", attack_o.steps)->capture_default_str();
  attack->add_option("--step-size", attack_o.step_size)->capture_default_str();
  attack->add_option("--in-dataset", attack_o.in_dataset)->required();
  attack->add_option("--classes", attack_o.classes)->capture_default_str();
  attack->add_option("--limit", attack_o.limit)->capture_default_str();
  attack->add_option("--out-dir", attack_o.out_dir)->required();
  add_seed(attack, attack_o.seed);

  DetectOptions detect_o;
  auto* det = app.add_subcommand("detect", "Classify one PNG as benign or adversarial");
  det->add_option("--predictor", detect_o.predictor, "builtin:<model> or exec:<command>")
      ->required();
  det->add_option("--alpha", detect_o.alpha)->capture_default_str();
  det->add_option("--input", detect_o.input)->required();

  EvalOptions eval_o;
  auto* eval = app.add_subcommand("eval", "TPR/TNR over an alpha sweep plus ROC and AUC");
  eval->add_option("--predictor", eval_o.predictor)->required();
  eval->add_option("--alphas", eval_o.alphas, "strictly descending")->capture_default_str();
  eval->add_option("--benign-dir", eval_o.benign_dir)->required();
  eval->add_option("--adv-dir", eval_o.adv_dirs, "repeatable; groups come from the manifests")
      ->required();
  eval->add_option("--report", eval_o.report, "JSON-lines output file");
  eval->add_flag("--baselines", eval_o.baselines, "also evaluate the comparison transforms");
  add_seed(eval, eval_o.seed);

  NoiseOptions noise_o;
  auto* noise = app.add_subcommand("noise", "Benign rate on naturally noisy images");
  noise->add_option("--predictor", noise_o.predictor)->required();
  noise->add_option("--alphas", noise_o.alphas)->capture_default_str();
  noise->add_option("--types", noise_o.types)->capture_default_str();
  noise->add_option("--params", noise_o.params)->capture_default_str();
  noise->add_option("--input-dir", noise_o.input_dir)->required();
  noise->add_option("--report", noise_o.report, "JSON-lines output file");
  add_seed(noise, noise_o.seed);

  BenchOptions bench_o;
  auto* bench = app.add_subcommand("bench", "Time the filter on random images");
  bench->add_option("--shape", bench_o.shape, "HxWxC")->capture_default_str();
  bench->add_option("--reps", bench_o.reps)->capture_default_str();
  bench->add_option("--alpha", bench_o.alpha)->capture_default_str();
  bench->add_option("--predictor", bench_o.predictor, "include two predictions per image");
  add_seed(bench, bench_o.seed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*filter) return cmd_filter(filter_o, out);
    if (*synth) return cmd_synth(synth_o, out);
    if (*train) return cmd_train(train_o, out, err);
    if (*exp) return cmd_export(export_o, out);
    if (*attack) return cmd_attack(attack_o, out);
    if (*det) return cmd_detect(detect_o, out);
    if (*eval) return cmd_eval(eval_o, out, err);
    if (*noise) return cmd_noise(noise_o, out);
    if (*bench) return cmd_bench(bench_o, out);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace recess
