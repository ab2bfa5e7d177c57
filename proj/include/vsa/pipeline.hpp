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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsa/detections.hpp"
#include "vsa/rules.hpp"
#include "vsa/stats.hpp"
#include "vsa/tracker.hpp"

namespace vsa {

inline constexpr const char* kVersion = "1.0.0";

struct StageSet {
  bool tracking = true;
  bool stats = true;
  bool rules = true;
};

struct PipelineConfig {
  enum class SourceKind { Dump, Synthetic };

  SourceKind source_kind = SourceKind::Dump;
  std::filesystem::path source_path;
  DumpOptions dump;
  TrackerConfig tracker;
  GridSpec grid;
  std::optional<std::filesystem::path> rules_path;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  StageSet stages;
  nlohmann::json echo;  // config as given, for the run manifest

  /// Throws ConfigError naming the offending path or field.
  void validate() const;
};

TrackerConfig tracker_config_from_json(const nlohmann::json& j);

/// Relative paths resolve against `base_dir`.
PipelineConfig pipeline_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// Tracker -> (stats, rules) for one source, frame by frame.
class AnalyticsPipeline {
 public:
  struct FrameOutput {
    std::vector<TrackObservation> tracks;
    std::vector<AlertEvent> alerts;
  };

  AnalyticsPipeline(const TrackerConfig& tracker, const GridSpec& grid, const RulesConfig& rules,
                    StageSet stages = {});

  FrameOutput process(const Frame& frame);

  const SortTracker& tracker() const { return tracker_; }
  const AnalyticsStats& stats() const { return stats_; }
  std::int64_t frames() const { return frames_; }

 private:
  StageSet stages_;
  SortTracker tracker_;
  AnalyticsStats stats_;
  RulesEngine rules_;
  std::int64_t frames_ = 0;
};

struct RunSummary {
  std::int64_t frames = 0;
  std::int64_t confirmed_tracks = 0;
  std::int64_t alerts = 0;
  std::vector<std::string> artifacts;
};

/// Streams the source through the enabled stages and writes tracks.jsonl,
/// alerts.jsonl, heatmap.csv, heatmap.pgm, flowmap.csv, dwell.json,
/// counts.json and run-manifest.json into the output directory.
RunSummary run(const PipelineConfig& config, std::ostream* log = nullptr);

std::string to_track_line(const TrackObservation& t);

}  // namespace vsa
