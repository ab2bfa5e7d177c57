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

#include "vsa/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "vsa/error.hpp"
#include "vsa/random.hpp"

namespace vsa {

using nlohmann::json;

void SyntheticSceneConfig::validate() const {
  if (width <= 0 || height <= 0) throw ConfigError("synthetic: width and height must be positive");
  if (!(fps > 0.0)) throw ConfigError("synthetic: fps must be positive");
  if (duration_frames < 0) throw ConfigError("synthetic: duration_frames must be non-negative");
  if (!(jitter_sigma >= 0.0)) throw ConfigError("synthetic: jitter_sigma must be >= 0");
  if (!(miss_probability >= 0.0 && miss_probability <= 1.0))
    throw ConfigError("synthetic: miss_probability must lie in [0,1]");
  if (!(false_positives_per_frame >= 0.0))
    throw ConfigError("synthetic: false_positives_per_frame must be >= 0");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto& o = objects[i];
    const std::string tag = "synthetic: object " + std::to_string(i) + ": ";
    if (o.class_label.empty()) throw ConfigError(tag + "empty class");
    if (!(o.size.x() > 0.0 && o.size.y() > 0.0)) throw ConfigError(tag + "size must be positive");
    if (o.size.x() > width || o.size.y() > height) throw ConfigError(tag + "box larger than frame");
    if (o.entry_frame < 0) throw ConfigError(tag + "negative entry_frame");
    if (o.exit_frame && *o.exit_frame < o.entry_frame)
      throw ConfigError(tag + "exit_frame before entry_frame");
    const Eigen::Vector2d half = o.size / 2.0;
    if (o.center.x() < half.x() || o.center.x() > width - half.x() || o.center.y() < half.y() ||
        o.center.y() > height - half.y())
      throw ConfigError(tag + "initial box not inside the frame");
  }
}

std::int64_t timestamp_for(std::int64_t frame_id, double fps) {
  return static_cast<std::int64_t>(std::llround(static_cast<double>(frame_id) * 1000.0 / fps));
}

namespace {

// Reflects one coordinate into [lo, hi], flipping the velocity on each bounce.
void reflect(double& c, double& v, double lo, double hi) {
  if (hi <= lo) {
    c = lo;
    v = 0.0;
    return;
  }
  for (int guard = 0; guard < 64 && (c < lo || c > hi); ++guard) {
    if (c < lo) c = 2.0 * lo - c;
    if (c > hi) c = 2.0 * hi - c;
    v = -v;
  }
  c = std::clamp(c, lo, hi);
}

BoundingBox box_at(const Eigen::Vector2d& c, const Eigen::Vector2d& size) {
  return {c.x() - size.x() / 2.0, c.y() - size.y() / 2.0, c.x() + size.x() / 2.0,
          c.y() + size.y() / 2.0};
}

}  // namespace

SyntheticScene generate(const SyntheticSceneConfig& config) {
  config.validate();
  Rng rng(config.seed);

  struct Body {
    Eigen::Vector2d pos;
    Eigen::Vector2d vel;
  };
  std::vector<Body> bodies;
  for (const auto& o : config.objects) bodies.push_back({o.center, o.velocity});

  std::vector<std::string> classes;
  {
    std::set<std::string> seen;
    for (const auto& o : config.objects)
      if (seen.insert(o.class_label).second) classes.push_back(o.class_label);
    if (classes.empty()) classes.push_back("person");
  }

  SyntheticScene scene;
  scene.ground_truth.reserve(config.duration_frames);
  scene.noisy.reserve(config.duration_frames);
  for (std::int64_t f = 0; f < config.duration_frames; ++f) {
    FrameMeta meta{config.source_id, f, timestamp_for(f, config.fps), config.width, config.height};
    Frame truth{meta, {}};
    Frame noisy{meta, {}};
    std::vector<std::size_t> ids;

    for (std::size_t i = 0; i < config.objects.size(); ++i) {
      const auto& spec = config.objects[i];
      auto& body = bodies[i];
      if (f < spec.entry_frame || (spec.exit_frame && f >= *spec.exit_frame)) continue;
      if (f > spec.entry_frame) {
        body.pos += body.vel;
        const Eigen::Vector2d half = spec.size / 2.0;
        reflect(body.pos.x(), body.vel.x(), half.x(), config.width - half.x());
        reflect(body.pos.y(), body.vel.y(), half.y(), config.height - half.y());
      }
      truth.detections.push_back({f, box_at(body.pos, spec.size), spec.class_label, 1.0});
      ids.push_back(i);
    }

    for (const auto& gt : truth.detections) {
      if (rng.bernoulli(config.miss_probability)) continue;
      const Eigen::Vector2d jitter{rng.normal(0.0, config.jitter_sigma),
                                   rng.normal(0.0, config.jitter_sigma)};
      Detection d = gt;
      if (config.jitter_sigma > 0.0) {
        const Eigen::Vector2d c = gt.bbox.center() + jitter;
        d.bbox = clip(box_at(c, {gt.bbox.width(), gt.bbox.height()}), meta);
      }
      d.confidence = std::max(0.5, 1.0 - jitter.norm() / 20.0);
      noisy.detections.push_back(std::move(d));
    }

    const auto n_fp = rng.poisson(config.false_positives_per_frame);
    for (std::uint64_t k = 0; k < n_fp; ++k) {
      const auto& cls = classes[rng.below(classes.size())];
      const double w = rng.uniform(8.0, std::max(8.0, config.width / 4.0));
      const double h = rng.uniform(8.0, std::max(8.0, config.height / 4.0));
      const double x = rng.uniform(0.0, std::max(0.0, config.width - w));
      const double y = rng.uniform(0.0, std::max(0.0, config.height - h));
      const double conf = rng.uniform(0.3, 0.9);
      noisy.detections.push_back({f, clip(BoundingBox{x, y, x + w, y + h}, meta), cls, conf});
    }

    scene.ground_truth.push_back(std::move(truth));
    scene.noisy.push_back(std::move(noisy));
    scene.truth_ids.push_back(std::move(ids));
  }
  return scene;
}

namespace {

Eigen::Vector2d vec2(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(std::string("synthetic: ") + what + " must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

SyntheticSceneConfig synthetic_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("synthetic config must be a JSON object");
  SyntheticSceneConfig c;
  try {
    c.source_id = j.value("source_id", c.source_id);
    c.width = j.value("width", c.width);
    c.height = j.value("height", c.height);
    c.fps = j.value("fps", c.fps);
    c.duration_frames = j.value("duration_frames", c.duration_frames);
    c.jitter_sigma = j.value("jitter_sigma", c.jitter_sigma);
    c.miss_probability = j.value("miss_probability", c.miss_probability);
    c.false_positives_per_frame = j.value("false_positives_per_frame", c.false_positives_per_frame);
    c.seed = j.value("seed", c.seed);
    if (auto it = j.find("objects"); it != j.end()) {
      for (const auto& o : *it) {
        ObjectSpec s;
        s.class_label = o.value("class", s.class_label);
        s.entry_frame = o.value("entry_frame", s.entry_frame);
        if (o.contains("exit_frame") && !o["exit_frame"].is_null())
          s.exit_frame = o["exit_frame"].get<std::int64_t>();
        if (o.contains("center")) s.center = vec2(o["center"], "center");
        if (o.contains("velocity")) s.velocity = vec2(o["velocity"], "velocity");
        if (o.contains("size")) s.size = vec2(o["size"], "size");
        c.objects.push_back(std::move(s));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("synthetic config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::ordered_json to_json(const SyntheticSceneConfig& c) {
  nlohmann::ordered_json objs = nlohmann::ordered_json::array();
  for (const auto& o : c.objects) {
    nlohmann::ordered_json jo = {{"class", o.class_label},
               {"entry_frame", o.entry_frame},
               {"center", {o.center.x(), o.center.y()}},
               {"velocity", {o.velocity.x(), o.velocity.y()}},
               {"size", {o.size.x(), o.size.y()}}};
    if (o.exit_frame) jo["exit_frame"] = *o.exit_frame;
    objs.push_back(std::move(jo));
  }
  return nlohmann::ordered_json{{"source_id", c.source_id},
          {"width", c.width},
          {"height", c.height},
          {"fps", c.fps},
          {"duration_frames", c.duration_frames},
          {"objects", std::move(objs)},
          {"jitter_sigma", c.jitter_sigma},
          {"miss_probability", c.miss_probability},
          {"false_positives_per_frame", c.false_positives_per_frame},
          {"seed", c.seed}};
}

SyntheticSceneConfig load_synthetic_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open synthetic config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return synthetic_config_from_json(j);
}

}  // namespace vsa
