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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsa/detections.hpp"
#include "vsa/tracker.hpp"

namespace vsa {

struct EvalConfig {
  double iou_threshold = 0.5;

  void validate() const;
};

/// Per-prediction and per-ground-truth outcome of greedy matching.
struct MatchResult {
  struct PredictionOutcome {
    bool true_positive = false;
    std::optional<std::size_t> matched_gt;  // index into the ground-truth list
  };
  std::vector<PredictionOutcome> predictions;  // parallel to the prediction list
  std::vector<bool> gt_matched;                // parallel to the ground-truth list
};

/// Predictions are visited by descending confidence (ties: lower frame id,
/// then input order). Each is a true positive when the best-IoU unmatched
/// ground truth of the same class and frame reaches the threshold; that
/// ground truth is then used up.
MatchResult match(std::span<const Detection> preds, std::span<const Detection> gts,
                  const EvalConfig& cfg = {});

/// All-point interpolated AP for one class: the sum over recall steps of
/// (r_i - r_{i-1}) * max precision at recall >= r_i. Nullopt when the class
/// has no ground truth.
std::optional<double> average_precision(std::span<const Detection> preds,
                                        std::span<const Detection> gts, const MatchResult& result,
                                        const std::string& class_label);

struct ClassScore {
  std::optional<double> ap;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t n_gt = 0;
};

struct EvalReport {
  EvalConfig config;
  std::map<std::string, ClassScore> per_class;
  double map = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

/// precision = TP / (TP + FP), 0 without predictions; recall = TP / #gt,
/// 0 without ground truth.
PrecisionRecall precision_recall(const MatchResult& result);

/// Mean of the defined per-class APs. Throws DataError when no class has
/// ground truth.
double mean_average_precision(const EvalReport& report);

EvalReport evaluate_detections(std::span<const Detection> preds, std::span<const Detection> gts,
                               const EvalConfig& cfg = {});

/// {per_class: {ap, tp, fp, n_gt}, map, precision, recall, config}
nlohmann::ordered_json to_json(const EvalReport& report);

/// Flattens frames into one detection list.
std::vector<Detection> flatten(std::span<const Frame> frames);

/// Ground-truth object identity boxes of one frame.
struct IdentityBox {
  std::size_t object_id = 0;
  BoundingBox bbox;
};

/// For every ground-truth object, each frame take the reported track with the
/// best IoU >= min_iou and count frames whose track id differs from the
/// object's previous associated id. The two lists are aligned by frame.
std::size_t id_switches(const std::vector<std::vector<TrackObservation>>& tracks_per_frame,
                        const std::vector<std::vector<IdentityBox>>& truth_per_frame,
                        double min_iou = 0.3);

}  // namespace vsa
