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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "scenarios.hpp"
#include "vsa/error.hpp"
#include "vsa/rules.hpp"
#include "vsa/zones.hpp"

namespace vsa {
namespace {

using scenario::box_with_anchor;
using scenario::frame_at;

const std::vector<Point> kUnitSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};

TEST(PolygonTest, UnitSquare) {
  EXPECT_TRUE(point_in_polygon({0.5, 0.5}, kUnitSquare));
  EXPECT_FALSE(point_in_polygon({2, 2}, kUnitSquare));
  EXPECT_TRUE(point_in_polygon({1, 0.5}, kUnitSquare));
  EXPECT_TRUE(point_in_polygon({0, 0}, kUnitSquare));
  EXPECT_TRUE(point_in_polygon({0.5, 1}, kUnitSquare));
}

TEST(PolygonTest, ConcaveNotch) {
  // L-shaped hexagon; the notch is the upper-right square.
  const std::vector<Point> l{{0, 0}, {4, 0}, {4, 2}, {2, 2}, {2, 4}, {0, 4}};
  EXPECT_FALSE(point_in_polygon({3, 3}, l));
  EXPECT_TRUE(point_in_polygon({1, 3}, l));
  EXPECT_TRUE(point_in_polygon({3, 1}, l));
  EXPECT_EQ(oracle::winding_number({3, 3}, l), 0);
}

TEST(PolygonTest, AgreesWithWindingNumber) {
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const auto poly = scenario::random_star_polygon(rng);
    ASSERT_TRUE(is_simple_polygon(poly));
    const Point p{rng.uniform(0, 100), rng.uniform(0, 100)};
    EXPECT_EQ(point_in_polygon(p, poly), oracle::winding_number(p, poly) != 0) << i;
  }
}

TEST(PolygonTest, SimplicityCheck) {
  EXPECT_TRUE(is_simple_polygon(kUnitSquare));
  const std::vector<Point> bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  EXPECT_FALSE(is_simple_polygon(bowtie));
  Zone z{"z", bowtie, {}};
  EXPECT_THROW(z.validate(), ConfigError);
}

TEST(CrossingTest, Examples) {
  const TripLine v{"v", {5, 0}, {5, 10}, DirectionPolicy::Any};
  // Walking +x across an upward line: the start lies on its left.
  const auto d = crossing({0, 5}, {10, 5}, v);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(*d, CrossDirection::LeftToRight);
  EXPECT_EQ(crossing({10, 5}, {0, 5}, v), CrossDirection::RightToLeft);
  EXPECT_FALSE(crossing({0, 1}, {0, 9}, v).has_value());
  const TripLine shortline{"s", {5, 0}, {5, 2}, DirectionPolicy::Any};
  EXPECT_FALSE(crossing({0, 5}, {10, 5}, shortline).has_value());
  EXPECT_FALSE(crossing({5, 5}, {10, 5}, v).has_value());
}

TEST(RulesTest, IntrusionFiresOnceAtEntry) {
  const auto alerts = scenario::run_intrusion_script();
  ASSERT_EQ(alerts.size(), 1u);
  EXPECT_EQ(alerts[0].frame_id, 40);
  EXPECT_EQ(alerts[0].track_id, 1);
  EXPECT_EQ(alerts[0].kind, RuleKind::Intrusion);
}

TEST(RulesTest, OutsideForeverNeverFires) {
  RulesEngine engine({scenario::square_intrusion()});
  for (std::int64_t f = 0; f < 100; ++f) {
    const TrackObservation t{f, 1, "person", box_with_anchor(10.0 + f, 20), TrackStatus::Confirmed};
    EXPECT_TRUE(engine.evaluate(frame_at(f), std::span(&t, 1)).empty());
  }
}

TEST(RulesTest, OscillationDebounced) {
  const auto alerts = scenario::run_oscillation_script();
  ASSERT_EQ(alerts.size(), 3u);
  EXPECT_EQ(alerts[0].frame_id, 1);
  EXPECT_EQ(alerts[1].frame_id, 301);
  EXPECT_EQ(alerts[2].frame_id, 601);
  for (std::size_t i = 1; i < alerts.size(); ++i)
    EXPECT_GE(alerts[i].timestamp_ms - alerts[i - 1].timestamp_ms, 30000);
}

TEST(RulesTest, StartingInsideDoesNotFire) {
  RulesEngine engine({scenario::square_intrusion(0)});
  std::vector<AlertEvent> all;
  const double xs[] = {120, 120, 90, 120};
  for (std::int64_t f = 0; f < 4; ++f) {
    const TrackObservation t{f, 3, "person", box_with_anchor(xs[f], 125), TrackStatus::Confirmed};
    const auto a = engine.evaluate(frame_at(f), std::span(&t, 1));
    all.insert(all.end(), a.begin(), a.end());
  }
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0].frame_id, 3);
}

TEST(RulesTest, ClassFilterAndTentativeIgnored) {
  auto rule = scenario::square_intrusion(0);
  rule.classes = {"car"};
  RulesEngine engine({rule});
  for (std::int64_t f = 0; f < 2; ++f) {
    const std::vector<TrackObservation> ts{
        {f, 1, "person", box_with_anchor(f ? 120 : 90, 125), TrackStatus::Confirmed},
        {f, 2, "car", box_with_anchor(f ? 120 : 90, 125), TrackStatus::Tentative}};
    EXPECT_TRUE(engine.evaluate(frame_at(f), ts).empty());
  }
}

TEST(RulesTest, LoiterFiresOncePerStay) {
  Rule r = scenario::square_intrusion(0);
  r.id = "loiter";
  r.kind = RuleKind::Loiter;
  r.threshold_ms = 1000;
  RulesEngine engine({r});
  std::vector<AlertEvent> all;
  for (std::int64_t f = 0; f < 60; ++f) {
    // Inside for frames 0..29, out for 30..34, back in from 35.
    const double x = (f >= 30 && f < 35) ? 50 : 120;
    const TrackObservation t{f, 4, "person", box_with_anchor(x, 125), TrackStatus::Confirmed};
    const auto a = engine.evaluate(frame_at(f), std::span(&t, 1));
    all.insert(all.end(), a.begin(), a.end());
  }
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].frame_id, 11);
  EXPECT_EQ(all[0].payload["dwell_ms"], 1100);
  EXPECT_EQ(all[1].frame_id, 46);
}

TEST(RulesTest, LineCrossDirectionPolicy) {
  Rule r;
  r.id = "gate";
  r.kind = RuleKind::LineCross;
  r.line = TripLine{"gate", {100, 0}, {100, 200}, DirectionPolicy::LeftToRight};
  r.debounce_ms = 0;
  RulesEngine engine({r});
  std::vector<AlertEvent> all;
  const double xs[] = {90, 110, 90, 110};
  for (std::int64_t f = 0; f < 4; ++f) {
    const TrackObservation t{f, 5, "person", box_with_anchor(xs[f], 50), TrackStatus::Confirmed};
    const auto a = engine.evaluate(frame_at(f), std::span(&t, 1));
    all.insert(all.end(), a.begin(), a.end());
  }
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].payload["direction"], "left_to_right");
  EXPECT_EQ(all[0].frame_id, 1);
  EXPECT_EQ(all[1].frame_id, 3);
}

TEST(RulesTest, OccupancyFiresAndRearms) {
  Rule r = scenario::square_intrusion(0);
  r.id = "occ";
  r.kind = RuleKind::Occupancy;
  r.min_count = 2;
  RulesEngine engine({r});
  const int counts[] = {0, 1, 2, 3, 1, 2};
  std::vector<AlertEvent> all;
  for (std::int64_t f = 0; f < 6; ++f) {
    std::vector<TrackObservation> ts;
    for (int k = 0; k < counts[f]; ++k)
      ts.push_back({f, k + 1, "person", box_with_anchor(110 + k, 125), TrackStatus::Confirmed});
    const auto a = engine.evaluate(frame_at(f), ts);
    all.insert(all.end(), a.begin(), a.end());
  }
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].frame_id, 2);
  EXPECT_FALSE(all[0].track_id.has_value());
  EXPECT_EQ(all[0].payload["count"], 2);
  EXPECT_EQ(all[1].frame_id, 5);
}

TEST(RulesTest, JsonConfig) {
  const auto j = nlohmann::json::parse(R"({
    "sink": "127.0.0.1:9",
    "rules": [
      {"id": "a", "kind": "intrusion", "zone": [[0,0],[10,0],[10,10],[0,10]], "classes": ["person"]},
      {"id": "b", "kind": "line_cross", "line": {"p": [0,0], "q": [0,10], "direction": "right_to_left"}},
      {"id": "c", "kind": "occupancy", "zone": [[0,0],[10,0],[10,10]], "min_count": 3, "comparator": ">"}
    ]})");
  const auto cfg = rules_from_json(j);
  ASSERT_EQ(cfg.rules.size(), 3u);
  EXPECT_EQ(cfg.sink, "127.0.0.1:9");
  EXPECT_EQ(cfg.rules[1].line->policy, DirectionPolicy::RightToLeft);
  EXPECT_EQ(cfg.rules[2].comparator, Comparator::Greater);
  EXPECT_EQ(cfg.rules[0].debounce_ms, 30000);
  EXPECT_THROW(rules_from_json(nlohmann::json::parse(R"([{"id":"x","kind":"loiter","zone":[[0,0],[1,0],[1,1]]}])")),
               ConfigError);
  EXPECT_THROW(rules_from_json(nlohmann::json::parse(R"([{"id":"x","kind":"teleport"}])")), ConfigError);
}

TEST(RulesTest, OutOfOrderFrames) {
  RulesEngine engine({});
  engine.evaluate(frame_at(3), {});
  EXPECT_THROW(engine.evaluate(frame_at(2), {}), DataError);
}

TEST(RulesTest, AlertJson) {
  AlertEvent e{"r", std::nullopt, 4, 400, RuleKind::Occupancy, {}};
  e.payload["count"] = 2;
  EXPECT_EQ(to_json(e).dump(),
            R"({"rule_id":"r","track_id":null,"frame":4,"ts_ms":400,"kind":"occupancy","payload":{"count":2}})");
}

}  // namespace
}  // namespace vsa
