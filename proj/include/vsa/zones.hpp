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

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vsa/geometry.hpp"

namespace vsa {

/// z-component of (b - a) x (c - a). Positive when c lies to the left of
/// a->b in a y-up frame.
inline double cross(const Point& a, const Point& b, const Point& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

inline bool on_segment(const Point& p, const Point& a, const Point& b, double eps = 1e-9) {
  const double scale = std::max({1.0, (b - a).norm()});
  if (std::abs(cross(a, b, p)) > eps * scale) return false;
  return p.x() >= std::min(a.x(), b.x()) - eps && p.x() <= std::max(a.x(), b.x()) + eps &&
         p.y() >= std::min(a.y(), b.y()) - eps && p.y() <= std::max(a.y(), b.y()) + eps;
}

/// Ray-casting parity test; points on an edge count as inside.
inline bool point_in_polygon(const Point& p, std::span<const Point> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = poly[i];
    const Point& b = poly[j];
    if (on_segment(p, a, b)) return true;
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x_at = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x_at) inside = !inside;
    }
  }
  return inside;
}

/// Proper or touching intersection of closed segments ab and cd.
inline bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  return (d1 == 0 && on_segment(a, c, d, 0.0)) || (d2 == 0 && on_segment(b, c, d, 0.0)) ||
         (d3 == 0 && on_segment(c, a, b, 0.0)) || (d4 == 0 && on_segment(d, a, b, 0.0));
}

/// No two non-adjacent edges meet and no edge has zero length.
bool is_simple_polygon(std::span<const Point> poly);

struct Zone {
  std::string id;
  std::vector<Point> polygon;
  std::set<std::string> classes;  // empty = every class

  bool admits(std::string_view label) const {
    return classes.empty() || classes.count(std::string(label)) > 0;
  }
  bool contains(const Point& p) const { return point_in_polygon(p, polygon); }

  /// Throws ConfigError unless the polygon has >= 3 vertices and is simple.
  void validate() const;
};

enum class CrossDirection { LeftToRight, RightToLeft };
enum class DirectionPolicy { Any, LeftToRight, RightToLeft };

std::string_view to_string(CrossDirection d);

/// Directed segment p->q. "Left" is the side where cross(p, q, x) > 0;
/// moving from that side to the other is LeftToRight.
struct TripLine {
  std::string id;
  Point p{0.0, 0.0};
  Point q{0.0, 0.0};
  DirectionPolicy policy = DirectionPolicy::Any;

  void validate() const;
};

/// Reports a crossing when prev and curr lie strictly on opposite sides of
/// the line through p, q and the motion segment meets the finite segment.
inline std::optional<CrossDirection> crossing(const Point& prev, const Point& curr, const TripLine& line) {
  const double s0 = cross(line.p, line.q, prev);
  const double s1 = cross(line.p, line.q, curr);
  if (!((s0 > 0 && s1 < 0) || (s0 < 0 && s1 > 0))) return std::nullopt;
  if (!segments_intersect(prev, curr, line.p, line.q)) return std::nullopt;
  return s0 > 0 ? CrossDirection::LeftToRight : CrossDirection::RightToLeft;
}

inline bool allows(DirectionPolicy policy, CrossDirection d) {
  switch (policy) {
    case DirectionPolicy::Any:
      return true;
    case DirectionPolicy::LeftToRight:
      return d == CrossDirection::LeftToRight;
    case DirectionPolicy::RightToLeft:
      return d == CrossDirection::RightToLeft;
  }
  return false;
}

}  // namespace vsa
