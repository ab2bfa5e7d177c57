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
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsa/tracker.hpp"
#include "vsa/zones.hpp"

namespace vsa {

enum class RuleKind { Intrusion, LineCross, Loiter, Occupancy };
enum class Comparator { GreaterEqual, Greater, LessEqual, Less, Equal };

std::string_view to_string(RuleKind k);
bool compare(Comparator c, std::int64_t lhs, std::int64_t rhs);

struct Rule {
  std::string id;
  RuleKind kind = RuleKind::Intrusion;
  std::optional<Zone> zone;      // Intrusion, Loiter, Occupancy
  std::optional<TripLine> line;  // LineCross
  std::set<std::string> classes;  // empty = every class
  std::int64_t debounce_ms = 30000;
  std::int64_t threshold_ms = 0;  // Loiter
  std::int64_t min_count = 1;     // Occupancy
  Comparator comparator = Comparator::GreaterEqual;

  bool admits(std::string_view label) const;
  void validate() const;
};

struct AlertEvent {
  std::string rule_id;
  std::optional<std::int64_t> track_id;  // empty for Occupancy
  std::int64_t frame_id = 0;
  std::int64_t timestamp_ms = 0;
  RuleKind kind = RuleKind::Intrusion;
  nlohmann::ordered_json payload = nlohmann::ordered_json::object();
};

nlohmann::ordered_json to_json(const AlertEvent& e);

struct RulesConfig {
  std::vector<Rule> rules;
  std::optional<std::string> sink;  // "host:port"

  /// Distinct zones referenced by the rules, in first-use order.
  std::vector<Zone> zones() const;
};

/// Accepts either a JSON array of rule objects or {"rules": [...], "sink": "host:port"}.
/// Rule object: {"id", "kind": "intrusion"|"line_cross"|"loiter"|"occupancy",
///   "zone": {"id", "polygon": [[x,y],...], "classes": [...]},
///   "line": {"id", "p": [x,y], "q": [x,y], "direction": "any"|"left_to_right"|"right_to_left"},
///   "classes": [...], "debounce_ms", "threshold_ms", "min_count",
///   "comparator": ">="|">"|"<="|"<"|"=="}
RulesConfig rules_from_json(const nlohmann::json& j);
RulesConfig load_rules(const std::filesystem::path& path);

/// Per-source rule state machine over Confirmed track observations, using
/// the bottom-center anchor.
///
///   Intrusion  fires on an outside -> inside transition. A track first seen
///              inside has no previous state and does not fire until it
///              leaves and re-enters.
///   Loiter     fires once per continuous stay when in-zone time exceeds
///              threshold_ms; the stay may start at first sighting.
///   LineCross  fires when consecutive anchors cross the trip line in an
///              allowed direction.
///   Occupancy  fires when the in-zone count starts satisfying the
///              comparator and re-arms once it stops.
///
/// Alerts closer than debounce_ms to the previous alert of the same
/// (rule, track) are dropped; Occupancy debounces per rule.
class RulesEngine {
 public:
  explicit RulesEngine(std::vector<Rule> rules);

  /// Throws DataError on a non-increasing frame id.
  std::vector<AlertEvent> evaluate(const FrameMeta& frame, std::span<const TrackObservation> tracks);

  const std::vector<Rule>& rules() const { return rules_; }

 private:
  struct TrackRuleState {
    bool inside = false;
    Point last_anchor{0.0, 0.0};
    std::int64_t inside_since_ms = 0;
    bool loiter_fired = false;
    std::optional<std::int64_t> last_alert_ms;
  };
  struct OccupancyState {
    bool satisfied = false;
    std::optional<std::int64_t> last_alert_ms;
  };

  bool debounced(const Rule& rule, const std::optional<std::int64_t>& last, std::int64_t now) const {
    return last && now - *last < rule.debounce_ms;
  }

  std::vector<Rule> rules_;
  std::map<std::pair<std::size_t, std::int64_t>, TrackRuleState> track_state_;
  std::vector<OccupancyState> occupancy_;
  std::optional<std::int64_t> last_frame_;
};

}  // namespace vsa
