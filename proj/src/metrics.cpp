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

#include "vsa/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include "vsa/error.hpp"

namespace vsa {

void EvalConfig::validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0))
    throw ConfigError("iou_threshold must lie in (0,1)");
}

namespace {

std::vector<std::size_t> confidence_order(std::span<const Detection> preds) {
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (preds[a].confidence != preds[b].confidence) return preds[a].confidence > preds[b].confidence;
    return preds[a].frame_id < preds[b].frame_id;
  });
  return order;
}

}  // namespace

MatchResult match(std::span<const Detection> preds, std::span<const Detection> gts,
                  const EvalConfig& cfg) {
  cfg.validate();
  MatchResult result;
  result.predictions.resize(preds.size());
  result.gt_matched.assign(gts.size(), false);

  std::map<std::pair<std::int64_t, std::string>, std::vector<std::size_t>> gt_index;
  for (std::size_t g = 0; g < gts.size(); ++g)
    gt_index[{gts[g].frame_id, gts[g].class_label}].push_back(g);

  for (const std::size_t p : confidence_order(preds)) {
    const auto it = gt_index.find({preds[p].frame_id, preds[p].class_label});
    if (it == gt_index.end()) continue;
    std::optional<std::size_t> best;
    double best_iou = -1.0;
    for (const std::size_t g : it->second) {
      if (result.gt_matched[g]) continue;
      const double v = iou(preds[p].bbox, gts[g].bbox);
      if (v > best_iou) {
        best_iou = v;
        best = g;
      }
    }
    if (best && best_iou >= cfg.iou_threshold) {
      result.gt_matched[*best] = true;
      result.predictions[p] = {true, *best};
    }
  }
  return result;
}

std::optional<double> average_precision(std::span<const Detection> preds,
                                        std::span<const Detection> gts, const MatchResult& result,
                                        const std::string& class_label) {
  const auto n_gt = static_cast<std::size_t>(
      std::count_if(gts.begin(), gts.end(), [&](const Detection& d) { return d.class_label == class_label; }));
  if (n_gt == 0) return std::nullopt;

  std::vector<double> precision;
  std::vector<double> recall;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (const std::size_t p : confidence_order(preds)) {
    if (preds[p].class_label != class_label) continue;
    if (result.predictions[p].true_positive) {
      ++tp;
    } else {
      ++fp;
    }
    precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
  }
  // Precision envelope, right to left.
  for (std::size_t i = precision.size(); i-- > 1;)
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < precision.size(); ++i) {
    ap += (recall[i] - prev_recall) * precision[i];
    prev_recall = recall[i];
  }
  return std::clamp(ap, 0.0, 1.0);
}

PrecisionRecall precision_recall(const MatchResult& result) {
  const auto tp = static_cast<std::size_t>(std::count_if(
      result.predictions.begin(), result.predictions.end(), [](const auto& o) { return o.true_positive; }));
  const std::size_t n_pred = result.predictions.size();
  const std::size_t n_gt = result.gt_matched.size();
  PrecisionRecall pr;
  pr.precision = n_pred ? static_cast<double>(tp) / static_cast<double>(n_pred) : 0.0;
  pr.recall = n_gt ? static_cast<double>(tp) / static_cast<double>(n_gt) : 0.0;
  return pr;
}

double mean_average_precision(const EvalReport& report) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& [label, score] : report.per_class) {
    if (!score.ap) continue;
    sum += *score.ap;
    ++n;
  }
  if (n == 0) throw DataError("mAP undefined: no class has ground truth");
  return sum / static_cast<double>(n);
}

EvalReport evaluate_detections(std::span<const Detection> preds, std::span<const Detection> gts,
                               const EvalConfig& cfg) {
  EvalReport report;
  report.config = cfg;
  const MatchResult result = match(preds, gts, cfg);
  std::set<std::string> classes;
  for (const auto& d : preds) classes.insert(d.class_label);
  for (const auto& d : gts) classes.insert(d.class_label);
  for (const auto& label : classes) {
    ClassScore score;
    for (std::size_t p = 0; p < preds.size(); ++p) {
      if (preds[p].class_label != label) continue;
      result.predictions[p].true_positive ? ++score.tp : ++score.fp;
    }
    score.n_gt = static_cast<std::size_t>(
        std::count_if(gts.begin(), gts.end(), [&](const Detection& d) { return d.class_label == label; }));
    score.ap = average_precision(preds, gts, result, label);
    report.per_class[label] = score;
  }
  report.map = mean_average_precision(report);
  const auto pr = precision_recall(result);
  report.precision = pr.precision;
  report.recall = pr.recall;
  return report;
}

nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
  for (const auto& [label, s] : report.per_class) {
    per_class[label] = {{"ap", s.ap ? nlohmann::ordered_json(*s.ap) : nlohmann::ordered_json(nullptr)},
                        {"tp", s.tp},
                        {"fp", s.fp},
                        {"n_gt", s.n_gt}};
  }
  nlohmann::ordered_json j;
  j["per_class"] = per_class;
  j["map"] = report.map;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["config"] = {{"iou_threshold", report.config.iou_threshold},
                 {"interpolation", "all-point"},
                 {"matching", "greedy by confidence, best-IoU unmatched same-class ground truth per frame"},
                 {"classes_without_ground_truth", "excluded from mAP"}};
  return j;
}

std::vector<Detection> flatten(std::span<const Frame> frames) {
  std::vector<Detection> out;
  for (const auto& f : frames) out.insert(out.end(), f.detections.begin(), f.detections.end());
  return out;
}

std::size_t id_switches(const std::vector<std::vector<TrackObservation>>& tracks_per_frame,
                        const std::vector<std::vector<IdentityBox>>& truth_per_frame,
                        double min_iou) {
  if (tracks_per_frame.size() != truth_per_frame.size())
    throw DataError("id_switches: per-frame inputs differ in length");
  std::unordered_map<std::size_t, std::int64_t> last_track;
  std::size_t switches = 0;
  for (std::size_t f = 0; f < truth_per_frame.size(); ++f) {
    for (const auto& obj : truth_per_frame[f]) {
      std::optional<std::int64_t> best;
      double best_iou = min_iou;
      for (const auto& t : tracks_per_frame[f]) {
        if (t.status != TrackStatus::Confirmed) continue;
        const double v = iou(t.bbox, obj.bbox);
        if (v >= best_iou && (!best || v > best_iou)) {
          best_iou = v;
          best = t.track_id;
        }
      }
      if (!best) continue;
      const auto it = last_track.find(obj.object_id);
      if (it != last_track.end() && it->second != *best) ++switches;
      last_track[obj.object_id] = *best;
    }
  }
  return switches;
}

}  // namespace vsa
