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

#include "vsa/pipeline.hpp"

#include <fstream>
#include <ostream>
#include <set>

#include "vsa/alert_sink.hpp"
#include "vsa/error.hpp"
#include "vsa/random.hpp"
#include "vsa/synthetic.hpp"

namespace vsa {

using nlohmann::json;

namespace {

template <int N>
Eigen::Matrix<double, N, 1> fixed_vector(const json& j, const char* what) {
  if (!j.is_array() || j.size() != N)
    throw ConfigError(std::string("tracker: ") + what + " needs " + std::to_string(N) + " numbers");
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v(i) = j[i].get<double>();
  return v;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace

TrackerConfig tracker_config_from_json(const json& j) {
  TrackerConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) throw ConfigError("tracker config must be an object");
  try {
    c.iou_min = j.value("iou_min", c.iou_min);
    c.max_age = j.value("max_age", c.max_age);
    c.min_hits = j.value("min_hits", c.min_hits);
    c.per_class = j.value("per_class", c.per_class);
    if (j.contains("process_noise")) c.noise.process = fixed_vector<7>(j["process_noise"], "process_noise");
    if (j.contains("measurement_noise"))
      c.noise.measurement = fixed_vector<4>(j["measurement_noise"], "measurement_noise");
    if (j.contains("initial_covariance"))
      c.noise.initial = fixed_vector<7>(j["initial_covariance"], "initial_covariance");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("tracker config: ") + e.what());
  }
  c.validate();
  return c;
}

void PipelineConfig::validate() const {
  if (!std::filesystem::is_regular_file(source_path))
    throw ConfigError("source file not found: " + source_path.string());
  if (rules_path && !std::filesystem::is_regular_file(*rules_path))
    throw ConfigError("rules file not found: " + rules_path->string());
  if (!stages.tracking && (stages.stats || stages.rules))
    throw ConfigError("stats and rules stages need the tracking stage");
  tracker.validate();
  grid.validate();
  if (dump.width <= 0 || dump.height <= 0) throw ConfigError("source width/height must be positive");
}

PipelineConfig pipeline_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("pipeline config must be a JSON object");
  PipelineConfig c;
  c.echo = j;
  try {
    const auto& src = j.at("source");
    const std::string type = src.at("type").get<std::string>();
    if (type == "dump") {
      c.source_kind = PipelineConfig::SourceKind::Dump;
    } else if (type == "synthetic") {
      c.source_kind = PipelineConfig::SourceKind::Synthetic;
    } else {
      throw ConfigError("source.type must be \"dump\" or \"synthetic\"");
    }
    c.source_path = resolve(base_dir, src.at("path").get<std::string>());
    c.dump.source_id = src.value("source_id", c.dump.source_id);
    c.dump.width = src.value("width", c.dump.width);
    c.dump.height = src.value("height", c.dump.height);
    c.tracker = tracker_config_from_json(j.value("tracker", json()));
    if (j.contains("grid")) c.grid.cell_size = j["grid"].value("cell_size", c.grid.cell_size);
    if (j.contains("rules") && !j["rules"].is_null())
      c.rules_path = resolve(base_dir, j["rules"].get<std::string>());
    c.output_dir = resolve(base_dir, j.value("output_dir", std::string("out")));
    c.seed = j.value("seed", c.seed);
    if (j.contains("stages")) {
      const auto& s = j["stages"];
      c.stages.tracking = s.value("tracking", true);
      c.stages.stats = s.value("stats", true);
      c.stages.rules = s.value("rules", true);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("pipeline config: ") + e.what());
  }
  return c;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return pipeline_config_from_json(j, path.parent_path());
}

AnalyticsPipeline::AnalyticsPipeline(const TrackerConfig& tracker, const GridSpec& grid,
                                     const RulesConfig& rules, StageSet stages)
    : stages_(stages), tracker_(tracker), stats_(grid, rules.zones()), rules_(rules.rules) {}

AnalyticsPipeline::FrameOutput AnalyticsPipeline::process(const Frame& frame) {
  FrameOutput out;
  ++frames_;
  if (!stages_.tracking) return out;
  out.tracks = tracker_.step(frame.meta, frame.detections);
  if (stages_.stats) stats_.ingest(frame.meta, out.tracks);
  if (stages_.rules) out.alerts = rules_.evaluate(frame.meta, out.tracks);
  return out;
}

std::string to_track_line(const TrackObservation& t) {
  nlohmann::ordered_json j;
  j["frame"] = t.frame_id;
  j["track_id"] = t.track_id;
  j["class"] = t.class_label;
  j["x1"] = t.bbox.x_min;
  j["y1"] = t.bbox.y_min;
  j["x2"] = t.bbox.x_max;
  j["y2"] = t.bbox.y_max;
  j["status"] = to_string(t.status);
  return j.dump();
}

namespace {

std::ofstream open_artifact(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

}  // namespace

RunSummary run(const PipelineConfig& config, std::ostream* log) {
  config.validate();
  RulesConfig rules;
  if (config.rules_path) rules = load_rules(*config.rules_path);

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec || !std::filesystem::is_directory(config.output_dir))
    throw ConfigError("cannot create output directory " + config.output_dir.string());

  std::unique_ptr<DetectionSource> source;
  std::optional<std::uint64_t> synthetic_seed;
  if (config.source_kind == PipelineConfig::SourceKind::Dump) {
    source = read_dump(config.source_path, config.dump);
  } else {
    auto scene_cfg = load_synthetic_config(config.source_path);
    synthetic_seed = derive_seed(config.seed, "synthetic");
    scene_cfg.seed = *synthetic_seed;
    source = std::make_unique<FrameListSource>(generate(scene_cfg).noisy);
  }

  std::unique_ptr<TcpAlertSink> sink;
  if (rules.sink && config.stages.rules) sink = std::make_unique<TcpAlertSink>(*rules.sink);

  AnalyticsPipeline pipeline(config.tracker, config.grid, rules, config.stages);
  RunSummary summary;
  const auto dir = config.output_dir;
  std::ofstream tracks_out;
  std::ofstream alerts_out;
  if (config.stages.tracking) {
    tracks_out = open_artifact(dir / "tracks.jsonl");
    summary.artifacts.push_back("tracks.jsonl");
  }
  if (config.stages.rules) {
    alerts_out = open_artifact(dir / "alerts.jsonl");
    summary.artifacts.push_back("alerts.jsonl");
  }

  std::set<std::int64_t> confirmed;
  while (auto frame = source->next()) {
    const auto out = pipeline.process(*frame);
    for (const auto& t : out.tracks) {
      tracks_out << to_track_line(t) << '\n';
      confirmed.insert(t.track_id);
    }
    for (const auto& a : out.alerts) {
      const std::string line = to_json(a).dump();
      alerts_out << line << '\n';
      if (sink) sink->publish(line);
    }
    summary.alerts += static_cast<std::int64_t>(out.alerts.size());
  }
  summary.frames = pipeline.frames();
  summary.confirmed_tracks = static_cast<std::int64_t>(confirmed.size());
  if (sink) sink->drain(std::chrono::milliseconds(500));

  if (config.stages.stats && summary.frames > 0) {
    const auto& stats = pipeline.stats();
    {
      auto out = open_artifact(dir / "heatmap.csv");
      stats.write_heatmap_csv(out);
    }
    write_pnm(dir / "heatmap.pgm", stats.heatmap_image());
    {
      auto out = open_artifact(dir / "flowmap.csv");
      stats.write_flowmap_csv(out);
    }
    open_artifact(dir / "dwell.json") << stats.dwell_json().dump(2) << '\n';
    open_artifact(dir / "counts.json") << stats.counts_json().dump(2) << '\n';
    for (const char* name : {"heatmap.csv", "heatmap.pgm", "flowmap.csv", "dwell.json", "counts.json"})
      summary.artifacts.push_back(name);
  }

  nlohmann::ordered_json manifest;
  manifest["tool"] = "vsa";
  manifest["version"] = kVersion;
  manifest["seed"] = config.seed;
  nlohmann::ordered_json stage_seeds = nlohmann::ordered_json::object();
  if (synthetic_seed) stage_seeds["synthetic"] = *synthetic_seed;
  manifest["stage_seeds"] = stage_seeds;
  manifest["frames"] = summary.frames;
  manifest["confirmed_tracks"] = summary.confirmed_tracks;
  manifest["alerts"] = summary.alerts;
  manifest["artifacts"] = summary.artifacts;
  manifest["config"] = config.echo;
  open_artifact(dir / "run-manifest.json") << manifest.dump(2) << '\n';
  summary.artifacts.push_back("run-manifest.json");

  if (log)
    *log << "processed " << summary.frames << " frames, " << summary.confirmed_tracks
         << " confirmed tracks, " << summary.alerts << " alerts -> " << dir.string() << '\n';
  return summary;
}

}  // namespace vsa
