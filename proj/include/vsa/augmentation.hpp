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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "vsa/image.hpp"
#include "vsa/random.hpp"

namespace vsa {

/// y = A x + B in pixel-center coordinates.
struct AffineTransform {
  Eigen::Matrix2d A = Eigen::Matrix2d::Identity();
  Eigen::Vector2d B = Eigen::Vector2d::Zero();

  static AffineTransform identity() { return {}; }
};

struct ColorJitter {
  Eigen::Vector3d scale = Eigen::Vector3d::Ones();
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
};

/// Sampled parameters, kept for provenance.
struct AugmentationParams {
  double rotation_deg = 0.0;
  double shear = 0.0;
  bool flip = false;
  ColorJitter jitter;
};

/// Rotation is capped at 10 degrees regardless of the configured value.
struct AugmentationBounds {
  static constexpr double kRotationCapDeg = 10.0;

  double max_rotation_deg = 10.0;
  double flip_probability = 0.5;
  double max_shear = 0.1;
  double color_scale_min = 0.9;
  double color_scale_max = 1.1;
  double color_offset_min = -10.0;
  double color_offset_max = 10.0;

  /// Throws ConfigError. Rotations above the cap are rejected.
  void validate() const;
};

/// Rotation uniform in [-max, +max] degrees, shear uniform in
/// [-max_shear, max_shear], flip ~ Bernoulli(flip_probability), per-channel
/// color scale and offset uniform in their ranges. Draw order: rotation,
/// shear, flip, then scale and offset for channels 0..2.
AugmentationParams sample_params(Rng& rng, const AugmentationBounds& bounds);

/// Composes rotation * shear * flip about the center of a width x height
/// image: A = R(theta) * [1 shear; 0 1] * diag(flip ? -1 : 1, 1),
/// B = c - A c with c = ((width-1)/2, (height-1)/2).
AffineTransform compose(const AugmentationParams& params, int width, int height);

/// Output pixel y samples the input at A^-1 (y - B) with bilinear
/// interpolation; samples outside the input are black. Color jitter
/// v * scale + offset is applied per channel, rounded and clamped to
/// [0,255]. Throws DomainError for singular A.
Image apply_transform(const Image& img, const AffineTransform& t, const ColorJitter& jitter = {});

struct ManifestRecord {
  std::string path;
  std::string class_label;
  std::optional<std::string> source;          // set for augmented records
  std::optional<AugmentationParams> params;   // set for augmented records
};

struct DatasetManifest {
  std::vector<ManifestRecord> records;

  std::map<std::string, std::size_t> class_counts() const;
};

/// CSV "path,class" (optional header). Extra columns are ignored. Paths must
/// be unique. Throws ParseError / DataError.
DatasetManifest load_manifest(const std::filesystem::path& path);

/// CSV "path,class,source,rotation_deg,shear,flip,scale_r,scale_g,scale_b,
/// offset_r,offset_g,offset_b" with a header row; provenance columns are
/// empty for originals.
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

struct ClassBalance {
  std::size_t before = 0;
  std::size_t after = 0;
  std::size_t generated = 0;
  std::size_t dropped = 0;
};

struct BalancePlan {
  std::size_t target = 0;
  DatasetManifest manifest;
  std::map<std::string, ClassBalance> report;
};

/// Equalizes every class to T = round(mean per-class count). Classes below T
/// keep all originals and gain T - n augmented copies of uniformly chosen
/// originals (named `<stem>__augNNN<ext>` under `augmented_dir`); classes
/// above T are subsampled uniformly without replacement, keeping input order.
/// Classes are processed in label order. Throws DataError on empty manifest.
BalancePlan balance(const DatasetManifest& manifest, const AugmentationBounds& bounds, Rng& rng,
                    const std::filesystem::path& augmented_dir = {});

/// Reads each augmented record's source image (relative to `input_root`),
/// applies its transform and writes it to the record path.
void materialize(const BalancePlan& plan, const std::filesystem::path& input_root);

nlohmann::ordered_json to_json(const BalancePlan& plan);

}  // namespace vsa
