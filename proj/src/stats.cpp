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

#include "vsa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "vsa/error.hpp"

namespace vsa {

void GridSpec::validate() const {
  if (cell_size < 1) throw ConfigError("grid cell_size must be >= 1");
}

Eigen::Vector2d FlowMap::average(int cell_x, int cell_y) const {
  const auto n = samples(cell_y, cell_x);
  if (n == 0) return Eigen::Vector2d::Zero();
  return {sum_dx(cell_y, cell_x) / static_cast<double>(n), sum_dy(cell_y, cell_x) / static_cast<double>(n)};
}

AnalyticsStats::AnalyticsStats(GridSpec grid, std::vector<Zone> zones)
    : grid_(grid), zones_(std::move(zones)) {
  grid_.validate();
  for (const auto& z : zones_) z.validate();
}

void AnalyticsStats::init_grid(const FrameMeta& frame) {
  if (frame.width <= 0 || frame.height <= 0) throw DataError("frame size must be positive");
  frame_width_ = frame.width;
  frame_height_ = frame.height;
  const int gw = (frame.width + grid_.cell_size - 1) / grid_.cell_size;
  const int gh = (frame.height + grid_.cell_size - 1) / grid_.cell_size;
  heat_.counts = CountGrid::Zero(gh, gw);
  flow_.sum_dx = Eigen::MatrixXd::Zero(gh, gw);
  flow_.sum_dy = Eigen::MatrixXd::Zero(gh, gw);
  flow_.samples = CountGrid::Zero(gh, gw);
}

std::optional<std::pair<int, int>> AnalyticsStats::cell_of(const Point& p) const {
  if (!(p.x() >= 0.0 && p.y() >= 0.0 && p.x() <= frame_width_ && p.y() <= frame_height_))
    return std::nullopt;
  const int cx = std::min(static_cast<int>(p.x() / grid_.cell_size), grid_width() - 1);
  const int cy = std::min(static_cast<int>(p.y() / grid_.cell_size), grid_height() - 1);
  return std::make_pair(cx, cy);
}

void AnalyticsStats::ingest(const FrameMeta& frame, std::span<const TrackObservation> tracks) {
  if (last_frame_ && frame.frame_id <= *last_frame_)
    throw DataError("stats: frame " + std::to_string(frame.frame_id) + " is not after frame " +
                    std::to_string(*last_frame_));
  if (!last_frame_) {
    init_grid(frame);
  } else if (frame.width != frame_width_ || frame.height != frame_height_) {
    throw DataError("stats: frame size changed mid-stream");
  }
  last_frame_ = frame.frame_id;

  for (const auto& t : tracks) {
    if (t.status != TrackStatus::Confirmed) continue;
    const Point anchor = t.bbox.anchor();
    ++observations_;
    if (const auto cell = cell_of(anchor)) {
      ++in_bounds_;
      heat_.counts(cell->second, cell->first) += 1;
    }

    auto [it, fresh] = tracks_.try_emplace(t.track_id);
    TrackState& st = it->second;
    std::vector<char> inside(zones_.size(), 0);
    for (std::size_t z = 0; z < zones_.size(); ++z)
      inside[z] = zones_[z].admits(t.class_label) && zones_[z].contains(anchor);

    if (fresh) {
      st.class_label = t.class_label;
      st.dwell.track_id = t.track_id;
      st.dwell.class_label = t.class_label;
      st.dwell.first_seen_ms = frame.timestamp_ms;
      for (const auto& z : zones_) st.dwell.zone_ms[z.id] += 0;
    } else {
      if (const auto prev_cell = cell_of(st.last_anchor)) {
        const auto [cx, cy] = *prev_cell;
        flow_.sum_dx(cy, cx) += anchor.x() - st.last_anchor.x();
        flow_.sum_dy(cy, cx) += anchor.y() - st.last_anchor.y();
        flow_.samples(cy, cx) += 1;
      }
      const std::int64_t dt = frame.timestamp_ms - st.dwell.last_seen_ms;
      for (std::size_t z = 0; z < zones_.size(); ++z)
        if (inside[z] && st.last_inside[z]) st.dwell.zone_ms[zones_[z].id] += std::max<std::int64_t>(dt, 0);
    }
    st.dwell.last_seen_ms = std::max(st.dwell.last_seen_ms, frame.timestamp_ms);
    st.timestamps.push_back(frame.timestamp_ms);
    st.last_anchor = anchor;
    st.last_inside = std::move(inside);
  }
}

std::size_t AnalyticsStats::unique_count(const std::string& class_label, std::int64_t t0,
                                         std::int64_t t1) const {
  if (t1 < t0) return 0;
  std::size_t n = 0;
  for (const auto& [id, st] : tracks_) {
    if (st.class_label != class_label) continue;
    const auto it = std::lower_bound(st.timestamps.begin(), st.timestamps.end(), t0);
    if (it != st.timestamps.end() && *it <= t1) ++n;
  }
  return n;
}

std::map<std::string, std::size_t> AnalyticsStats::class_totals() const {
  std::map<std::string, std::size_t> out;
  for (const auto& [id, st] : tracks_) ++out[st.class_label];
  return out;
}

std::vector<DwellRecord> AnalyticsStats::dwell_report() const {
  std::vector<DwellRecord> out;
  out.reserve(tracks_.size());
  for (const auto& [id, st] : tracks_) out.push_back(st.dwell);
  return out;
}

void AnalyticsStats::write_heatmap_csv(std::ostream& out) const {
  std::ostringstream buf;
  for (Eigen::Index r = 0; r < heat_.counts.rows(); ++r) {
    for (Eigen::Index c = 0; c < heat_.counts.cols(); ++c) {
      if (c) buf << ',';
      buf << heat_.counts(r, c);
    }
    buf << '\n';
  }
  out << buf.str();
}

Image AnalyticsStats::heatmap_image() const {
  if (heat_.counts.size() == 0) return Image(1, 1, 1);
  Image img(grid_width(), grid_height(), 1);
  const std::int64_t peak = heat_.counts.maxCoeff();
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const auto v = peak > 0 ? (heat_.counts(y, x) * 255 + peak / 2) / peak : 0;
      img.at(x, y, 0) = static_cast<std::uint8_t>(v);
    }
  return img;
}

void AnalyticsStats::write_flowmap_csv(std::ostream& out) const {
  std::ostringstream buf;
  buf << std::setprecision(17) << "cell_x,cell_y,avg_dx,avg_dy,samples\n";
  for (int cy = 0; cy < grid_height(); ++cy)
    for (int cx = 0; cx < grid_width(); ++cx) {
      const auto n = flow_.samples(cy, cx);
      if (n == 0) continue;
      const auto avg = flow_.average(cx, cy);
      buf << cx << ',' << cy << ',' << avg.x() << ',' << avg.y() << ',' << n << '\n';
    }
  out << buf.str();
}

nlohmann::ordered_json AnalyticsStats::dwell_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& d : dwell_report()) {
    nlohmann::ordered_json zones = nlohmann::ordered_json::object();
    for (const auto& [zid, ms] : d.zone_ms) zones[zid] = ms;
    arr.push_back({{"track_id", d.track_id},
                   {"class", d.class_label},
                   {"first_seen_ms", d.first_seen_ms},
                   {"last_seen_ms", d.last_seen_ms},
                   {"total_ms", d.total_ms()},
                   {"zones", zones}});
  }
  return arr;
}

nlohmann::ordered_json AnalyticsStats::counts_json() const {
  nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
  for (const auto& [label, n] : class_totals()) per_class[label] = n;
  nlohmann::ordered_json j;
  j["unique_tracks"] = tracks_.size();
  j["per_class"] = per_class;
  j["observations"] = observations_;
  j["in_bounds_observations"] = in_bounds_;
  return j;
}

}  // namespace vsa
