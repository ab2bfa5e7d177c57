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

#include <sstream>

#include "oracles.hpp"
#include "scenarios.hpp"
#include "vsa/error.hpp"
#include "vsa/stats.hpp"

namespace vsa {
namespace {

using scenario::box_with_anchor;

FrameMeta meta(std::int64_t f, std::int64_t ts, int w = 100, int h = 100) { return {"s", f, ts, w, h}; }

TrackObservation obs(std::int64_t f, std::int64_t id, double ax, double ay, std::string cls = "person") {
  return {f, id, std::move(cls), box_with_anchor(ax, ay), TrackStatus::Confirmed};
}

TEST(StatsTest, StationaryTrackHeat) {
  AnalyticsStats stats(GridSpec{10});
  for (std::int64_t f = 0; f < 20; ++f) {
    const auto t = obs(f, 1, 55, 77);
    stats.ingest(meta(f, f * 100), std::span(&t, 1));
  }
  EXPECT_EQ(stats.heat_map().at(5, 7), 20);
  EXPECT_EQ(stats.heat_map().mass(), 20);
  EXPECT_EQ(stats.grid_width(), 10);
  EXPECT_EQ(stats.grid_height(), 10);
}

TEST(StatsTest, FlowAverage) {
  AnalyticsStats stats(GridSpec{10});
  // Anchor x = 20, 22, ..., 30; the first five moves start inside cell 2.
  for (std::int64_t f = 0; f < 6; ++f) {
    const auto t = obs(f, 1, 20.0 + 2.0 * f, 55);
    stats.ingest(meta(f, f * 100), std::span(&t, 1));
  }
  EXPECT_EQ(stats.flow_map().samples(5, 2), 5);
  const auto avg = stats.flow_map().average(2, 5);
  EXPECT_DOUBLE_EQ(avg.x(), 2.0);
  EXPECT_DOUBLE_EQ(avg.y(), 0.0);
}

TEST(StatsTest, ZeroTracks) {
  AnalyticsStats stats(GridSpec{10});
  for (std::int64_t f = 0; f < 5; ++f) stats.ingest(meta(f, f * 100), {});
  EXPECT_EQ(stats.heat_map().mass(), 0);
  EXPECT_EQ(stats.flow_map().samples.sum(), 0);
  EXPECT_TRUE(stats.dwell_report().empty());
  EXPECT_EQ(stats.unique_count("person", 0, 1000), 0u);
}

TEST(StatsTest, UniqueCounts) {
  AnalyticsStats stats(GridSpec{10});
  for (std::int64_t f = 0; f < 100; ++f) {
    std::vector<TrackObservation> ts{obs(f, 1, 10, 10)};
    if (f >= 50) ts.push_back(obs(f, 2, 40, 40));
    stats.ingest(meta(f, 1000 + f * 100), ts);
  }
  EXPECT_EQ(stats.unique_count("person", 1000, 20000), 2u);
  EXPECT_EQ(stats.unique_count("person", 1000, 5000), 1u);
  EXPECT_EQ(stats.unique_count("person", 0, 999), 0u);
  EXPECT_EQ(stats.unique_count("car", 0, 1e9), 0u);
}

TEST(StatsTest, DwellTotalsAndZones) {
  const Zone z{"z", {{0, 0}, {50, 0}, {50, 100}, {0, 100}}, {}};
  const Zone never{"never", {{90, 90}, {99, 90}, {99, 99}}, {}};
  AnalyticsStats stats(GridSpec{10}, {z, never});
  // 1000..5000 ms at 500 ms spacing; inside while x < 50, i.e. 1000..3000 ms.
  for (std::int64_t f = 0; f <= 8; ++f) {
    const double x = f <= 4 ? 10.0 + f : 80.0;
    const auto t = obs(f, 9, x, 50);
    stats.ingest(meta(f, 1000 + 500 * f), std::span(&t, 1));
  }
  const auto report = stats.dwell_report();
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].total_ms(), 4000);
  EXPECT_EQ(report[0].zone_ms.at("z"), 2000);
  EXPECT_EQ(report[0].zone_ms.at("never"), 0);
}

TEST(StatsTest, OutOfBoundsAnchorsNotCounted) {
  AnalyticsStats stats(GridSpec{10});
  const std::vector<TrackObservation> ts{obs(0, 1, 100, 100), obs(0, 2, 101, 50), obs(0, 3, -1, 5)};
  stats.ingest(meta(0, 0), ts);
  EXPECT_EQ(stats.observations(), 3);
  EXPECT_EQ(stats.in_bounds_observations(), 1);
  EXPECT_EQ(stats.heat_map().at(9, 9), 1);
}

TEST(StatsTest, OutOfOrderRejected) {
  AnalyticsStats stats;
  stats.ingest(meta(4, 0), {});
  EXPECT_THROW(stats.ingest(meta(4, 0), {}), DataError);
}

TEST(StatsTest, MatchesBruteForceOnRandomScenes) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto cfg = scenario::crowd(8, 150, seed);
    cfg.jitter_sigma = 2;
    const auto log = scenario::tracked_log(generate(cfg), {});
    const std::vector<Zone> zones{{"left", {{0.5, 0.5}, {400.3, 0.5}, {400.3, 719.5}, {0.5, 719.5}}, {}},
                                  {"cars", {{300.7, 200.1}, {900.2, 150.4}, {1000.9, 600.6}}, {"car"}}};
    AnalyticsStats stats(GridSpec{16}, zones);
    for (const auto& f : log) stats.ingest(f.meta, f.tracks);
    const auto brute = oracle::brute_stats(log, 16, zones);
    EXPECT_EQ(stats.heat_map().mass(), stats.in_bounds_observations());
    EXPECT_EQ(stats.in_bounds_observations(), brute.in_bounds);
    for (int cy = 0; cy < stats.grid_height(); ++cy)
      for (int cx = 0; cx < stats.grid_width(); ++cx) {
        const auto it = brute.heat.find({cx, cy});
        EXPECT_EQ(stats.heat_map().at(cx, cy), it == brute.heat.end() ? 0 : it->second);
      }
    EXPECT_EQ(stats.flow_map().samples.sum(), brute.flow_samples);
    const auto report = stats.dwell_report();
    ASSERT_EQ(report.size(), brute.seen.size());
    for (const auto& d : report) {
      EXPECT_EQ(d.first_seen_ms, brute.seen.at(d.track_id).first);
      EXPECT_EQ(d.last_seen_ms, brute.seen.at(d.track_id).second);
      EXPECT_EQ(d.zone_ms, brute.zone_ms.at(d.track_id));
      for (const auto& [id, ms] : d.zone_ms) {
        EXPECT_GE(ms, 0);
        EXPECT_LE(ms, d.total_ms());
      }
    }
    for (const char* cls : {"person", "car", "bicycle"})
      for (std::int64_t t0 : {0, 1000, 3000})
        EXPECT_EQ(stats.unique_count(cls, t0, t0 + 2500), oracle::brute_unique(log, cls, t0, t0 + 2500));
  }
}

TEST(StatsTest, Exports) {
  AnalyticsStats stats(GridSpec{50});
  const std::vector<TrackObservation> a{obs(0, 1, 10, 10), obs(0, 2, 60, 10)};
  const std::vector<TrackObservation> b{obs(1, 1, 12, 10)};
  stats.ingest(meta(0, 0), a);
  stats.ingest(meta(1, 100), b);
  std::ostringstream heat, flow;
  stats.write_heatmap_csv(heat);
  EXPECT_EQ(heat.str(), "2,1\n0,0\n");
  const auto img = stats.heatmap_image();
  EXPECT_EQ(img.at(0, 0, 0), 255);
  EXPECT_EQ(img.at(1, 0, 0), 128);
  EXPECT_EQ(img.at(0, 1, 0), 0);
  stats.write_flowmap_csv(flow);
  EXPECT_EQ(flow.str().substr(0, flow.str().find('\n')), "cell_x,cell_y,avg_dx,avg_dy,samples");
  const auto counts = stats.counts_json();
  EXPECT_EQ(counts["unique_tracks"], 2);
  EXPECT_EQ(counts["per_class"]["person"], 2);
}

}  // namespace
}  // namespace vsa
