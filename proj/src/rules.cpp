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

#include "vsa/rules.hpp"

#include <fstream>

#include "vsa/error.hpp"

namespace vsa {

using nlohmann::json;

bool is_simple_polygon(std::span<const Point> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i)
    if ((poly[i] - poly[(i + 1) % n]).norm() == 0.0) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(a, b, poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

void Zone::validate() const {
  if (id.empty()) throw ConfigError("zone id must not be empty");
  if (polygon.size() < 3) throw ConfigError("zone " + id + ": polygon needs at least 3 vertices");
  if (!is_simple_polygon(polygon)) throw ConfigError("zone " + id + ": polygon is not simple");
}

void TripLine::validate() const {
  if (id.empty()) throw ConfigError("line id must not be empty");
  if (p == q) throw ConfigError("line " + id + ": endpoints coincide");
}

std::string_view to_string(CrossDirection d) {
  return d == CrossDirection::LeftToRight ? "left_to_right" : "right_to_left";
}

std::string_view to_string(RuleKind k) {
  switch (k) {
    case RuleKind::Intrusion:
      return "intrusion";
    case RuleKind::LineCross:
      return "line_cross";
    case RuleKind::Loiter:
      return "loiter";
    case RuleKind::Occupancy:
      return "occupancy";
  }
  return "unknown";
}

bool compare(Comparator c, std::int64_t lhs, std::int64_t rhs) {
  switch (c) {
    case Comparator::GreaterEqual:
      return lhs >= rhs;
    case Comparator::Greater:
      return lhs > rhs;
    case Comparator::LessEqual:
      return lhs <= rhs;
    case Comparator::Less:
      return lhs < rhs;
    case Comparator::Equal:
      return lhs == rhs;
  }
  return false;
}

bool Rule::admits(std::string_view label) const {
  if (!classes.empty() && classes.count(std::string(label)) == 0) return false;
  return !zone || zone->admits(label);
}

void Rule::validate() const {
  if (id.empty()) throw ConfigError("rule id must not be empty");
  if (debounce_ms < 0) throw ConfigError("rule " + id + ": debounce_ms must be >= 0");
  if (kind == RuleKind::LineCross) {
    if (!line) throw ConfigError("rule " + id + ": line_cross needs a line");
    line->validate();
  } else {
    if (!zone) throw ConfigError("rule " + id + ": needs a zone");
    zone->validate();
  }
  if (kind == RuleKind::Loiter && threshold_ms <= 0)
    throw ConfigError("rule " + id + ": threshold_ms must be > 0");
  if (kind == RuleKind::Occupancy && min_count <= 0)
    throw ConfigError("rule " + id + ": min_count must be > 0");
}

nlohmann::ordered_json to_json(const AlertEvent& e) {
  nlohmann::ordered_json j;
  j["rule_id"] = e.rule_id;
  j["track_id"] = e.track_id ? nlohmann::ordered_json(*e.track_id) : nlohmann::ordered_json(nullptr);
  j["frame"] = e.frame_id;
  j["ts_ms"] = e.timestamp_ms;
  j["kind"] = to_string(e.kind);
  j["payload"] = e.payload;
  return j;
}

std::vector<Zone> RulesConfig::zones() const {
  std::vector<Zone> out;
  std::set<std::string> seen;
  for (const auto& r : rules)
    if (r.zone && seen.insert(r.zone->id).second) out.push_back(*r.zone);
  return out;
}

namespace {

Point point_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(what + " must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::set<std::string> classes_from(const json& obj) {
  std::set<std::string> out;
  if (auto it = obj.find("classes"); it != obj.end() && !it->is_null())
    for (const auto& c : *it) out.insert(c.get<std::string>());
  return out;
}

Zone zone_from(const json& j, const std::string& rule_id) {
  Zone z;
  if (j.is_array()) {
    z.id = rule_id + ".zone";
    for (const auto& v : j) z.polygon.push_back(point_from(v, "zone " + z.id + " vertex"));
    return z;
  }
  z.id = j.value("id", rule_id + ".zone");
  const auto& poly = j.at("polygon");
  if (!poly.is_array()) throw ConfigError("zone " + z.id + ": polygon must be an array");
  for (const auto& v : poly) z.polygon.push_back(point_from(v, "zone " + z.id + " vertex"));
  z.classes = classes_from(j);
  return z;
}

TripLine line_from(const json& j, const std::string& rule_id) {
  TripLine l;
  l.id = j.value("id", rule_id + ".line");
  l.p = point_from(j.at("p"), "line " + l.id + " p");
  l.q = point_from(j.at("q"), "line " + l.id + " q");
  const std::string dir = j.value("direction", "any");
  if (dir == "any") {
    l.policy = DirectionPolicy::Any;
  } else if (dir == "left_to_right") {
    l.policy = DirectionPolicy::LeftToRight;
  } else if (dir == "right_to_left") {
    l.policy = DirectionPolicy::RightToLeft;
  } else {
    throw ConfigError("line " + l.id + ": unknown direction '" + dir + "'");
  }
  return l;
}

Rule rule_from(const json& j) {
  if (!j.is_object()) throw ConfigError("rule must be a JSON object");
  Rule r;
  r.id = j.at("id").get<std::string>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "intrusion") {
    r.kind = RuleKind::Intrusion;
  } else if (kind == "line_cross") {
    r.kind = RuleKind::LineCross;
  } else if (kind == "loiter") {
    r.kind = RuleKind::Loiter;
  } else if (kind == "occupancy") {
    r.kind = RuleKind::Occupancy;
  } else {
    throw ConfigError("rule " + r.id + ": unknown kind '" + kind + "'");
  }
  if (j.contains("zone")) r.zone = zone_from(j["zone"], r.id);
  if (j.contains("line")) r.line = line_from(j["line"], r.id);
  r.classes = classes_from(j);
  r.debounce_ms = j.value("debounce_ms", r.debounce_ms);
  r.threshold_ms = j.value("threshold_ms", r.threshold_ms);
  r.min_count = j.value("min_count", r.min_count);
  const std::string cmp = j.value("comparator", ">=");
  if (cmp == ">=") {
    r.comparator = Comparator::GreaterEqual;
  } else if (cmp == ">") {
    r.comparator = Comparator::Greater;
  } else if (cmp == "<=") {
    r.comparator = Comparator::LessEqual;
  } else if (cmp == "<") {
    r.comparator = Comparator::Less;
  } else if (cmp == "==") {
    r.comparator = Comparator::Equal;
  } else {
    throw ConfigError("rule " + r.id + ": unknown comparator '" + cmp + "'");
  }
  r.validate();
  return r;
}

}  // namespace

RulesConfig rules_from_json(const json& j) {
  RulesConfig cfg;
  try {
    const json* list = &j;
    if (j.is_object()) {
      list = &j.at("rules");
      if (j.contains("sink") && !j["sink"].is_null()) cfg.sink = j["sink"].get<std::string>();
    }
    if (!list->is_array()) throw ConfigError("rules config must be an array of rule objects");
    std::set<std::string> ids;
    for (const auto& r : *list) {
      cfg.rules.push_back(rule_from(r));
      if (!ids.insert(cfg.rules.back().id).second)
        throw ConfigError("duplicate rule id " + cfg.rules.back().id);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("rules config: ") + e.what());
  }
  return cfg;
}

RulesConfig load_rules(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rules file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return rules_from_json(j);
}

RulesEngine::RulesEngine(std::vector<Rule> rules) : rules_(std::move(rules)) {
  for (const auto& r : rules_) r.validate();
  occupancy_.resize(rules_.size());
}

std::vector<AlertEvent> RulesEngine::evaluate(const FrameMeta& frame,
                                              std::span<const TrackObservation> tracks) {
  if (last_frame_ && frame.frame_id <= *last_frame_)
    throw DataError("rules: frame " + std::to_string(frame.frame_id) + " is not after frame " +
                    std::to_string(*last_frame_));
  last_frame_ = frame.frame_id;
  const std::int64_t now = frame.timestamp_ms;
  std::vector<AlertEvent> alerts;

  for (std::size_t ri = 0; ri < rules_.size(); ++ri) {
    const Rule& rule = rules_[ri];

    if (rule.kind == RuleKind::Occupancy) {
      std::int64_t count = 0;
      for (const auto& t : tracks)
        if (t.status == TrackStatus::Confirmed && rule.admits(t.class_label) &&
            rule.zone->contains(t.bbox.anchor()))
          ++count;
      auto& st = occupancy_[ri];
      const bool satisfied = compare(rule.comparator, count, rule.min_count);
      if (satisfied && !st.satisfied && !debounced(rule, st.last_alert_ms, now)) {
        AlertEvent e{rule.id, std::nullopt, frame.frame_id, now, rule.kind, {}};
        e.payload["count"] = count;
        alerts.push_back(std::move(e));
        st.last_alert_ms = now;
      }
      st.satisfied = satisfied;
      continue;
    }

    for (const auto& t : tracks) {
      if (t.status != TrackStatus::Confirmed || !rule.admits(t.class_label)) continue;
      const Point anchor = t.bbox.anchor();
      auto [it, fresh] = track_state_.try_emplace({ri, t.track_id});
      TrackRuleState& st = it->second;
      std::optional<AlertEvent> fired;

      switch (rule.kind) {
        case RuleKind::Intrusion: {
          const bool inside = rule.zone->contains(anchor);
          if (!fresh && !st.inside && inside)
            fired = AlertEvent{rule.id, t.track_id, frame.frame_id, now, rule.kind, {}};
          st.inside = inside;
          break;
        }
        case RuleKind::Loiter: {
          const bool inside = rule.zone->contains(anchor);
          if (inside && (fresh || !st.inside)) {
            st.inside_since_ms = now;
            st.loiter_fired = false;
          }
          if (inside && !st.loiter_fired && now - st.inside_since_ms > rule.threshold_ms &&
              !debounced(rule, st.last_alert_ms, now)) {
            fired = AlertEvent{rule.id, t.track_id, frame.frame_id, now, rule.kind, {}};
            fired->payload["dwell_ms"] = now - st.inside_since_ms;
            st.loiter_fired = true;
          }
          st.inside = inside;
          break;
        }
        case RuleKind::LineCross: {
          if (!fresh) {
            const auto dir = crossing(st.last_anchor, anchor, *rule.line);
            if (dir && allows(rule.line->policy, *dir)) {
              fired = AlertEvent{rule.id, t.track_id, frame.frame_id, now, rule.kind, {}};
              fired->payload["direction"] = to_string(*dir);
            }
          }
          break;
        }
        case RuleKind::Occupancy:
          break;
      }
      st.last_anchor = anchor;

      if (fired && !debounced(rule, st.last_alert_ms, now)) {
        st.last_alert_ms = now;
        alerts.push_back(std::move(*fired));
      }
    }
  }
  return alerts;
}

}  // namespace vsa
