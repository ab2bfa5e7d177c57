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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsa/detections.hpp"

namespace vsa {

struct ObjectSpec {
  std::string class_label = "person";
  std::int64_t entry_frame = 0;
  std::optional<std::int64_t> exit_frame;  // exclusive
  Eigen::Vector2d center{0.0, 0.0};
  Eigen::Vector2d velocity{0.0, 0.0};  // px/frame
  Eigen::Vector2d size{10.0, 10.0};    // width, height
};

/// Seeded constant-velocity scene standing in for a deployed detector.
/// Objects reflect elastically off the frame borders.
struct SyntheticSceneConfig {
  std::string source_id = "synthetic";
  int width = 640;
  int height = 480;
  double fps = 10.0;
  std::int64_t duration_frames = 100;
  std::vector<ObjectSpec> objects;
  double jitter_sigma = 0.0;
  double miss_probability = 0.0;
  double false_positives_per_frame = 0.0;
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;
};

struct SyntheticScene {
  std::vector<Frame> ground_truth;
  std::vector<Frame> noisy;
  /// Object index of every ground-truth detection, parallel to ground_truth.
  std::vector<std::vector<std::size_t>> truth_ids;
};

/// Per frame, in order: ground-truth boxes of active objects (object order),
/// then for each active object one miss draw, and if kept two jitter normals;
/// then a Poisson count of false positives each drawing class, size, position
/// and confidence. All draws come from one Rng seeded with config.seed.
SyntheticScene generate(const SyntheticSceneConfig& config);

std::int64_t timestamp_for(std::int64_t frame_id, double fps);

SyntheticSceneConfig synthetic_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const SyntheticSceneConfig& config);
SyntheticSceneConfig load_synthetic_config(const std::filesystem::path& path);

}  // namespace vsa
