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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "vsa/image.hpp"
#include "vsa/tracker.hpp"
#include "vsa/zones.hpp"

namespace vsa {

struct GridSpec {
  int cell_size = 10;

  void validate() const;
};

using CountGrid = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Track-frame observations per cell. Indexed (cell_y, cell_x).
struct HeatMap {
  CountGrid counts;

  std::int64_t at(int cell_x, int cell_y) const { return counts(cell_y, cell_x); }
  std::int64_t mass() const { return counts.sum(); }
};

/// Accumulated anchor displacement per cell, keyed by the cell of the
/// earlier position.
struct FlowMap {
  Eigen::MatrixXd sum_dx;
  Eigen::MatrixXd sum_dy;
  CountGrid samples;

  Eigen::Vector2d average(int cell_x, int cell_y) const;
};

struct DwellRecord {
  std::int64_t track_id = 0;
  std::string class_label;
  std::int64_t first_seen_ms = 0;
  std::int64_t last_seen_ms = 0;
  std::map<std::string, std::int64_t> zone_ms;

  std::int64_t total_ms() const { return last_seen_ms - first_seen_ms; }
};

/// Per-source accumulator over Confirmed track observations. The anchor of
/// a box is its bottom-center. A zone interval between consecutive
/// observations of a track counts when both anchors lie in the zone.
class AnalyticsStats {
 public:
  explicit AnalyticsStats(GridSpec grid = {}, std::vector<Zone> zones = {});

  /// Throws DataError on a non-increasing frame id or a frame size change.
  void ingest(const FrameMeta& frame, std::span<const TrackObservation> tracks);

  const HeatMap& heat_map() const { return heat_; }
  const FlowMap& flow_map() const { return flow_; }
  int grid_width() const { return static_cast<int>(heat_.counts.cols()); }
  int grid_height() const { return static_cast<int>(heat_.counts.rows()); }

  /// Distinct Confirmed track ids of the class observed with t0 <= ts <= t1.
  std::size_t unique_count(const std::string& class_label, std::int64_t t0, std::int64_t t1) const;
  /// Distinct track ids per class over the whole run.
  std::map<std::string, std::size_t> class_totals() const;

  std::vector<DwellRecord> dwell_report() const;

  std::int64_t observations() const { return observations_; }
  std::int64_t in_bounds_observations() const { return in_bounds_; }

  /// Counts as CSV, one grid row per line.
  void write_heatmap_csv(std::ostream& out) const;
  /// Counts scaled so the maximum maps to 255.
  Image heatmap_image() const;
  /// "cell_x,cell_y,avg_dx,avg_dy,samples" for cells with samples.
  void write_flowmap_csv(std::ostream& out) const;
  nlohmann::ordered_json dwell_json() const;
  nlohmann::ordered_json counts_json() const;

 private:
  struct TrackState {
    std::string class_label;
    std::vector<std::int64_t> timestamps;
    Point last_anchor{0.0, 0.0};
    std::vector<char> last_inside;  // per zone
    DwellRecord dwell;
  };

  std::optional<std::pair<int, int>> cell_of(const Point& p) const;
  void init_grid(const FrameMeta& frame);

  GridSpec grid_;
  std::vector<Zone> zones_;
  HeatMap heat_;
  FlowMap flow_;
  int frame_width_ = 0;
  int frame_height_ = 0;
  std::optional<std::int64_t> last_frame_;
  std::map<std::int64_t, TrackState> tracks_;
  std::int64_t observations_ = 0;
  std::int64_t in_bounds_ = 0;
};

}  // namespace vsa
