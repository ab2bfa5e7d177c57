// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// vsa: file-driven front end for the analytics pipeline and the training-side
// tools. Exit codes: 0 success, 2 config error, 3 data error, 4 internal error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "vsa/augmentation.hpp"
#include "vsa/detections.hpp"
#include "vsa/diversity.hpp"
#include "vsa/error.hpp"
#include "vsa/metrics.hpp"
#include "vsa/pipeline.hpp"
#include "vsa/random.hpp"
#include "vsa/softmax.hpp"
#include "vsa/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw vsa::DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw vsa::DataError("cannot write " + path.string());
  return out;
}

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c, bool out_required, const std::string& out_help) {
  cmd->add_option("--seed", c.seed, "Seed override");
  auto* out = cmd->add_option("--out", c.out, out_help);
  if (out_required) out->required();
  cmd->add_flag("--quiet", c.quiet, "Suppress progress output");
}

// ---- run ------------------------------------------------------------------

int cmd_run(const std::string& config_path, const Common& common) {
  auto config = vsa::load_pipeline_config(config_path);
  if (common.seed) {
    config.seed = *common.seed;
    config.echo["seed"] = *common.seed;
  }
  if (!common.out.empty()) {
    config.output_dir = common.out;
    config.echo["output_dir"] = common.out;
  }
  vsa::run(config, common.quiet ? nullptr : &std::cerr);
  return kExitOk;
}

// ---- synth ----------------------------------------------------------------

int cmd_synth(const std::string& config_path, const Common& common) {
  auto config = vsa::load_synthetic_config(config_path);
  if (common.seed) config.seed = *common.seed;
  const auto scene = vsa::generate(config);
  const fs::path dir = common.out.empty() ? fs::path(".") : fs::path(common.out);
  fs::create_directories(dir);
  vsa::write_dump(dir / "ground_truth.jsonl", scene.ground_truth);
  vsa::write_dump(dir / "detections.jsonl", scene.noisy);
  if (!common.quiet)
    std::cerr << "wrote " << scene.noisy.size() << " frames to " << dir.string() << '\n';
  return kExitOk;
}

// ---- summarize ------------------------------------------------------------

struct SummarizeArgs {
  std::string signatures;
  std::string images;
  std::size_t budget = 500;
  std::string model = "facility_location";
  double alpha = 0.5;
  double fps = 1.0;
  bool naive = false;
};

int cmd_summarize(const SummarizeArgs& a, const Common& common) {
  if (a.signatures.empty() == a.images.empty())
    throw vsa::ConfigError("give exactly one of --signatures or --images");
  vsa::DiversityModel model;
  if (a.model == "facility_location") {
    model.kind = vsa::DiversityKind::FacilityLocation;
  } else if (a.model == "saturated_coverage") {
    model.kind = vsa::DiversityKind::SaturatedCoverage;
  } else {
    throw vsa::ConfigError("--model must be facility_location or saturated_coverage");
  }
  model.alpha = a.alpha;
  model.validate();
  const auto ground = a.signatures.empty() ? vsa::ground_set_from_images(a.images, a.fps)
                                           : vsa::load_signature_csv(a.signatures);
  const vsa::SimilarityKernel kernel(ground);
  const auto sel = a.naive ? vsa::greedy_select(model, kernel, a.budget)
                           : vsa::lazy_greedy_select(model, kernel, a.budget);
  auto out = open_out(common.out);
  vsa::write_selection_csv(out, ground, sel);
  if (!common.quiet)
    std::cerr << "selected " << sel.items.size() << " of " << ground.size() << " items ("
              << sel.evaluations << " gain evaluations)\n";
  return kExitOk;
}

// ---- augment --------------------------------------------------------------

struct AugmentArgs {
  std::string manifest;
  vsa::AugmentationBounds bounds;
};

int cmd_augment(const AugmentArgs& a, const Common& common) {
  const fs::path manifest_path(a.manifest);
  const fs::path input_root = manifest_path.parent_path();
  const fs::path out_dir(common.out);
  fs::create_directories(out_dir / "images");
  const auto manifest = vsa::load_manifest(manifest_path);
  vsa::Rng rng(vsa::derive_seed(common.seed.value_or(0), "augment"));
  auto plan = vsa::balance(manifest, a.bounds, rng, out_dir / "images");
  vsa::materialize(plan, input_root);
  // Originals keep pointing at the input tree.
  for (auto& rec : plan.manifest.records)
    if (!rec.source && fs::path(rec.path).is_relative())
      rec.path = (input_root / rec.path).lexically_normal().string();
  vsa::write_manifest(out_dir / "manifest.csv", plan.manifest);
  write_json(out_dir / "report.json", vsa::to_json(plan));
  if (!common.quiet)
    std::cerr << "balanced to " << plan.target << " samples per class -> " << out_dir.string() << '\n';
  return kExitOk;
}

// ---- train-head / predict -------------------------------------------------

struct TrainArgs {
  std::string features;
  std::string report;
  vsa::TrainConfig config;
};

int cmd_train(const TrainArgs& a, const Common& common) {
  auto cfg = a.config;
  if (common.seed) cfg.seed = *common.seed;
  const auto data = vsa::load_feature_csv(a.features);
  const auto result = vsa::train(data, cfg);
  write_json(common.out, vsa::to_json(result.model));
  auto report = vsa::to_json(vsa::evaluate_classifier(result.model, data));
  report["final_loss"] = result.loss_history.back();
  report["epochs"] = result.epochs;
  if (!a.report.empty()) write_json(a.report, report);
  if (!common.quiet)
    std::cerr << "trained " << result.model.num_classes() << "-class head on " << data.size()
              << " rows, training accuracy " << report["accuracy"].get<double>() << '\n';
  return kExitOk;
}

struct PredictArgs {
  std::string model;
  std::string features;
  std::string report;
  std::optional<double> reject_below;
};

int cmd_predict(const PredictArgs& a, const Common& common) {
  std::ifstream in(a.model);
  if (!in) throw vsa::DataError("cannot open model " + a.model);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw vsa::DataError(a.model + ": " + e.what());
  }
  const auto model = vsa::softmax_model_from_json(j);
  const auto data = vsa::load_feature_csv(a.features);

  std::ostringstream buf;
  buf << std::setprecision(17) << "id,label";
  for (const auto& c : model.classes) buf << ",p_" << c;
  buf << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = vsa::predict(model, data.features.row(static_cast<Eigen::Index>(i)).transpose(),
                                a.reject_below);
    buf << data.ids[i] << ',' << p.label.value_or("");
    for (Eigen::Index k = 0; k < p.probabilities.size(); ++k) buf << ',' << p.probabilities(k);
    buf << '\n';
  }
  open_out(common.out) << buf.str();
  if (!a.report.empty())
    write_json(a.report, vsa::to_json(vsa::evaluate_classifier(model, data, a.reject_below)));
  if (!common.quiet) std::cerr << "predicted " << data.size() << " rows\n";
  return kExitOk;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string pred;
  std::string gt;
  double iou = 0.5;
};

int cmd_eval(const EvalArgs& a, const Common& common) {
  vsa::EvalConfig cfg{a.iou};
  cfg.validate();
  const auto preds_src = vsa::read_dump(a.pred);
  const auto gts_src = vsa::read_dump(a.gt);
  const auto preds = vsa::flatten(vsa::collect(*preds_src));
  const auto gts = vsa::flatten(vsa::collect(*gts_src));
  const auto report = vsa::evaluate_detections(preds, gts, cfg);
  write_json(common.out, vsa::to_json(report));
  if (!common.quiet) std::cerr << "mAP@" << a.iou << " = " << report.map << '\n';
  return kExitOk;
}

void report_error(const std::string& command, const char* kind, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = {{"command", command}, {"type", kind}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surveillance video analytics: tracking, statistics, alerts and training tools"};
  app.require_subcommand(1);
  app.set_version_flag("--version", vsa::kVersion);

  std::string run_config;
  Common run_common;
  auto* run = app.add_subcommand("run", "Run source -> tracker -> stats/rules and write artifacts");
  run->add_option("--config", run_config, "Pipeline config (JSON)")->required()->check(CLI::ExistingFile);
  add_common(run, run_common, false, "Output directory (overrides config)");

  std::string synth_config;
  Common synth_common;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scene as detection dumps");
  synth->add_option("--config", synth_config, "Synthetic scene config (JSON)")->required()->check(CLI::ExistingFile);
  add_common(synth, synth_common, false, "Output directory");

  SummarizeArgs sum_args;
  Common sum_common;
  auto* summarize = app.add_subcommand("summarize", "Select a diverse subset of frames");
  summarize->add_option("--signatures", sum_args.signatures, "Signature CSV (item_id,v1..vd)")->check(CLI::ExistingFile);
  summarize->add_option("--images", sum_args.images, "Directory of PPM/PGM frames")->check(CLI::ExistingDirectory);
  summarize->add_option("--budget", sum_args.budget, "Number of frames to select")->capture_default_str();
  summarize->add_option("--model", sum_args.model, "facility_location | saturated_coverage")->capture_default_str();
  summarize->add_option("--alpha", sum_args.alpha, "Saturation for saturated_coverage")->capture_default_str();
  summarize->add_option("--fps", sum_args.fps, "Sampling rate recorded for image directories")->capture_default_str();
  summarize->add_flag("--naive", sum_args.naive, "Use plain greedy instead of lazy greedy");
  add_common(summarize, sum_common, true, "Selection CSV");

  AugmentArgs aug_args;
  Common aug_common;
  auto* augment = app.add_subcommand("augment", "Balance classes with random affine augmentation");
  augment->add_option("--manifest", aug_args.manifest, "Manifest CSV (path,class)")->required()->check(CLI::ExistingFile);
  augment->add_option("--max-rotation", aug_args.bounds.max_rotation_deg, "Degrees, at most 10")->capture_default_str();
  augment->add_option("--flip-probability", aug_args.bounds.flip_probability)->capture_default_str();
  augment->add_option("--max-shear", aug_args.bounds.max_shear)->capture_default_str();
  add_common(augment, aug_common, true, "Output directory");

  TrainArgs train_args;
  Common train_common;
  auto* train = app.add_subcommand("train-head", "Train a softmax head on feature vectors");
  train->add_option("--features", train_args.features, "Feature CSV (id,label,v1..vd)")->required()->check(CLI::ExistingFile);
  train->add_option("--report", train_args.report, "Training-set evaluation report (JSON)");
  train->add_option("--lr", train_args.config.learning_rate)->capture_default_str();
  train->add_option("--lambda", train_args.config.l2_lambda)->capture_default_str();
  train->add_option("--epochs", train_args.config.max_epochs)->capture_default_str();
  train->add_option("--tol", train_args.config.convergence_tol)->capture_default_str();
  add_common(train, train_common, true, "Model file (JSON)");

  PredictArgs pred_args;
  Common pred_common;
  auto* predict = app.add_subcommand("predict", "Classify feature vectors with a trained head");
  predict->add_option("--model", pred_args.model, "Model file (JSON)")->required()->check(CLI::ExistingFile);
  predict->add_option("--features", pred_args.features, "Feature CSV")->required()->check(CLI::ExistingFile);
  predict->add_option("--report", pred_args.report, "Evaluation report (JSON); needs labels in the CSV");
  predict->add_option("--reject-below", pred_args.reject_below, "Open-set rejection threshold");
  add_common(predict, pred_common, true, "Predictions CSV");

  EvalArgs eval_args;
  Common eval_common;
  auto* eval = app.add_subcommand("eval", "Score detections against ground truth (mAP)");
  eval->add_option("--pred", eval_args.pred, "Prediction dump (JSONL)")->required()->check(CLI::ExistingFile);
  eval->add_option("--gt", eval_args.gt, "Ground-truth dump (JSONL)")->required()->check(CLI::ExistingFile);
  eval->add_option("--iou", eval_args.iou, "IoU threshold")->capture_default_str();
  add_common(eval, eval_common, true, "Report (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (*run) return cmd_run(run_config, run_common);
    if (*synth) return cmd_synth(synth_config, synth_common);
    if (*summarize) return cmd_summarize(sum_args, sum_common);
    if (*augment) return cmd_augment(aug_args, aug_common);
    if (*train) return cmd_train(train_args, train_common);
    if (*predict) return cmd_predict(pred_args, pred_common);
    if (*eval) return cmd_eval(eval_args, eval_common);
  } catch (const vsa::ConfigError& e) {
    report_error(name, "config_error", e.what());
    return kExitConfig;
  } catch (const vsa::DataError& e) {
    report_error(name, "data_error", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    report_error(name, "internal_error", e.what());
    return kExitInternal;
  }
  return kExitInternal;
}
