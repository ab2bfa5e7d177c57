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

#include "vsa/tracker.hpp"

#include <algorithm>
#include <map>

#include "vsa/error.hpp"
#include "vsa/hungarian.hpp"

namespace vsa {

std::string_view to_string(TrackStatus s) {
  switch (s) {
    case TrackStatus::Tentative:
      return "Tentative";
    case TrackStatus::Confirmed:
      return "Confirmed";
    case TrackStatus::Deleted:
      return "Deleted";
  }
  return "Unknown";
}

void TrackerConfig::validate() const {
  if (!(iou_min > 0.0 && iou_min < 1.0)) throw ConfigError("tracker: iou_min must lie in (0,1)");
  if (max_age < 1) throw ConfigError("tracker: max_age must be >= 1");
  if (min_hits < 1) throw ConfigError("tracker: min_hits must be >= 1");
  if ((noise.measurement.array() <= 0.0).any())
    throw ConfigError("tracker: measurement noise must be positive");
  if ((noise.process.array() < 0.0).any() || (noise.initial.array() <= 0.0).any())
    throw ConfigError("tracker: process noise must be >= 0 and initial covariance positive");
}

SortTracker::SortTracker(TrackerConfig config) : config_(std::move(config)) { config_.validate(); }

namespace {

bool finite_box(const BoundingBox& b) {
  return std::isfinite(b.x_min) && std::isfinite(b.y_min) && std::isfinite(b.x_max) &&
         std::isfinite(b.y_max);
}

}  // namespace

void SortTracker::associate(std::span<const std::size_t> track_idx,
                            std::span<const std::size_t> det_idx,
                            std::span<const Detection> detections,
                            std::vector<std::ptrdiff_t>& det_to_track) {
  if (track_idx.empty() || det_idx.empty()) return;
  Eigen::MatrixXd cost(track_idx.size(), det_idx.size());
  for (std::size_t i = 0; i < track_idx.size(); ++i)
    for (std::size_t j = 0; j < det_idx.size(); ++j)
      cost(i, j) = 1.0 - iou(predicted_[track_idx[i]], detections[det_idx[j]].bbox);
  for (const auto& [r, c] : hungarian_assign(cost)) {
    if (1.0 - cost(r, c) < config_.iou_min) continue;
    det_to_track[det_idx[c]] = static_cast<std::ptrdiff_t>(track_idx[r]);
  }
}

std::vector<TrackObservation> SortTracker::step(const FrameMeta& frame,
                                                std::span<const Detection> detections) {
  if (last_frame_ && frame.frame_id <= *last_frame_)
    throw DataError("tracker: frame " + std::to_string(frame.frame_id) +
                    " is not after frame " + std::to_string(*last_frame_));
  const std::int64_t elapsed = last_frame_ ? frame.frame_id - *last_frame_ : 1;
  last_frame_ = frame.frame_id;

  // Predict and age.
  std::vector<Track> live;
  live.reserve(tracks_.size());
  predicted_.clear();
  for (auto& t : tracks_) {
    const std::int64_t steps = std::min<std::int64_t>(elapsed, config_.max_age + 1);
    for (std::int64_t k = 0; k < steps; ++k) t.kalman = kalman_predict(t.kalman, config_.noise);
    if (t.time_since_update > 0 || elapsed > 1) t.hits = 0;
    t.time_since_update = static_cast<int>(
        std::min<std::int64_t>(t.time_since_update + elapsed, config_.max_age + 1));
    const BoundingBox predicted = t.kalman.box();
    if (t.time_since_update > config_.max_age || !finite_box(predicted)) {
      t.status = TrackStatus::Deleted;
      continue;
    }
    predicted_.push_back(predicted);
    live.push_back(std::move(t));
  }
  tracks_ = std::move(live);

  // Associate, optionally per class.
  std::vector<std::ptrdiff_t> det_to_track(detections.size(), -1);
  if (config_.per_class) {
    std::map<std::string_view, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
    for (std::size_t i = 0; i < tracks_.size(); ++i) groups[tracks_[i].class_label].first.push_back(i);
    for (std::size_t j = 0; j < detections.size(); ++j)
      groups[detections[j].class_label].second.push_back(j);
    for (const auto& [label, g] : groups) associate(g.first, g.second, detections, det_to_track);
  } else {
    std::vector<std::size_t> all_t(tracks_.size()), all_d(detections.size());
    for (std::size_t i = 0; i < all_t.size(); ++i) all_t[i] = i;
    for (std::size_t j = 0; j < all_d.size(); ++j) all_d[j] = j;
    associate(all_t, all_d, detections, det_to_track);
  }

  // Correct matched tracks.
  for (std::size_t j = 0; j < detections.size(); ++j) {
    if (det_to_track[j] < 0) continue;
    auto& t = tracks_[static_cast<std::size_t>(det_to_track[j])];
    t.kalman = kalman_update(t.kalman, detections[j].bbox, config_.noise);
    t.time_since_update = 0;
    t.hits += 1;
    if (t.status == TrackStatus::Tentative && t.hits >= config_.min_hits)
      t.status = TrackStatus::Confirmed;
    t.history.emplace_back(frame.frame_id, t.kalman.box());
  }

  // Spawn from unmatched detections with usable geometry.
  for (std::size_t j = 0; j < detections.size(); ++j) {
    if (det_to_track[j] >= 0) continue;
    const auto& d = detections[j];
    if (!(d.bbox.width() > 0.0 && d.bbox.height() > 0.0)) continue;
    Track t;
    t.track_id = next_id_++;
    t.kalman = KalmanBoxState<double>::from_box(d.bbox, config_.noise);
    t.class_label = d.class_label;
    t.hits = 1;
    t.status = config_.min_hits <= 1 ? TrackStatus::Confirmed : TrackStatus::Tentative;
    t.history.emplace_back(frame.frame_id, d.bbox);
    tracks_.push_back(std::move(t));
  }

  std::vector<TrackObservation> out;
  for (const auto& t : tracks_) {
    if (t.status != TrackStatus::Confirmed || t.time_since_update != 0) continue;
    out.push_back({frame.frame_id, t.track_id, t.class_label, t.history.back().second, t.status});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.track_id < b.track_id; });
  return out;
}

}  // namespace vsa
