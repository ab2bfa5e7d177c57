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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <Eigen/Core>

namespace vsa {

/// Axis-aligned box in corner format. Coordinates are closed intervals in
/// pixel units; a valid box has x_min <= x_max and y_min <= y_max.
template <typename Scalar>
struct Box {
  Scalar x_min{0};
  Scalar y_min{0};
  Scalar x_max{0};
  Scalar y_max{0};

  Scalar width() const { return x_max - x_min; }
  Scalar height() const { return y_max - y_min; }
  Scalar area() const { return width() * height(); }
  bool valid() const { return x_min <= x_max && y_min <= y_max; }

  Eigen::Matrix<Scalar, 2, 1> center() const {
    return {(x_min + x_max) / Scalar(2), (y_min + y_max) / Scalar(2)};
  }

  /// Foot point (bottom-center), the ground-plane anchor shared by the
  /// statistics and rules modules.
  Eigen::Matrix<Scalar, 2, 1> anchor() const { return {(x_min + x_max) / Scalar(2), y_max}; }

  friend bool operator==(const Box&, const Box&) = default;
};

using BoundingBox = Box<double>;
using Point = Eigen::Vector2d;

/// Intersection over union. Returns 0 when the union has zero area.
template <typename Scalar>
Scalar iou(const Box<Scalar>& a, const Box<Scalar>& b) {
  const Scalar iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const Scalar ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= Scalar(0) || ih <= Scalar(0)) return Scalar(0);
  const Scalar inter = iw * ih;
  const Scalar uni = a.area() + b.area() - inter;
  if (uni <= Scalar(0)) return Scalar(0);
  return std::clamp(inter / uni, Scalar(0), Scalar(1));
}

struct FrameMeta {
  std::string source_id;
  std::int64_t frame_id{0};
  std::int64_t timestamp_ms{0};
  int width{0};
  int height{0};
};

/// Clamps a box to [0,width] x [0,height]. A box entirely outside collapses to
/// a degenerate box on the frame border.
template <typename Scalar>
Box<Scalar> clip(const Box<Scalar>& b, const FrameMeta& frame) {
  const auto w = static_cast<Scalar>(frame.width);
  const auto h = static_cast<Scalar>(frame.height);
  Box<Scalar> out{std::clamp(b.x_min, Scalar(0), w), std::clamp(b.y_min, Scalar(0), h),
                  std::clamp(b.x_max, Scalar(0), w), std::clamp(b.y_max, Scalar(0), h)};
  return out;
}

struct Detection {
  std::int64_t frame_id{0};
  BoundingBox bbox;
  std::string class_label;
  double confidence{1.0};
};

/// Throws DomainError when the detection breaks a type invariant.
void validate(const Detection& d);

}  // namespace vsa
