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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vsa/geometry.hpp"
#include "vsa/kalman.hpp"

namespace vsa {

enum class TrackStatus { Tentative, Confirmed, Deleted };

std::string_view to_string(TrackStatus s);

struct TrackerConfig {
  double iou_min = 0.3;
  int max_age = 1;
  int min_hits = 3;
  bool per_class = true;
  KalmanNoise<double> noise;

  void validate() const;
};

/// Full per-identity state held by the tracker.
struct Track {
  std::int64_t track_id = 0;
  KalmanBoxState<double> kalman;
  std::string class_label;
  TrackStatus status = TrackStatus::Tentative;
  int hits = 0;               // consecutive matches
  int time_since_update = 0;  // frames
  std::vector<std::pair<std::int64_t, BoundingBox>> history;
};

/// What a step reports for one track on one frame.
struct TrackObservation {
  std::int64_t frame_id = 0;
  std::int64_t track_id = 0;
  std::string class_label;
  BoundingBox bbox;
  TrackStatus status = TrackStatus::Confirmed;
};

/// SORT: constant-velocity Kalman prediction, 1 - IoU Hungarian association
/// gated at iou_min, hit/age lifecycle. One instance per source; calls to
/// step must be serialized.
///
/// Lifecycle per step: every live track is predicted once per elapsed frame
/// (gaps in frame_id count as unmatched frames), tracks whose
/// time_since_update then exceeds max_age are deleted, the rest are
/// associated. A new detection spawns a Tentative track with hits = 1; it is
/// Confirmed once hits reaches min_hits. An unmatched track's hit streak
/// resets to 0.
class SortTracker {
 public:
  explicit SortTracker(TrackerConfig config = {});

  /// Returns the Confirmed tracks matched on this frame, ordered by track_id,
  /// with their corrected boxes. Throws DataError on non-increasing frame_id.
  std::vector<TrackObservation> step(const FrameMeta& frame, std::span<const Detection> detections);

  const std::vector<Track>& tracks() const { return tracks_; }
  const TrackerConfig& config() const { return config_; }
  std::int64_t tracks_created() const { return next_id_ - 1; }

 private:
  void associate(std::span<const std::size_t> track_idx, std::span<const std::size_t> det_idx,
                 std::span<const Detection> detections, std::vector<std::ptrdiff_t>& det_to_track);

  TrackerConfig config_;
  std::vector<Track> tracks_;
  std::vector<BoundingBox> predicted_;
  std::int64_t next_id_ = 1;
  std::optional<std::int64_t> last_frame_;
};

}  // namespace vsa
