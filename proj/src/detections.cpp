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

#include "vsa/detections.hpp"

#include <cmath>
#include <json.hpp>

#include "vsa/error.hpp"

namespace vsa {

using nlohmann::json;

void validate(const Detection& d) {
  if (d.class_label.empty()) throw DomainError("detection has an empty class label");
  if (!(d.confidence >= 0.0 && d.confidence <= 1.0))
    throw DomainError("confidence " + std::to_string(d.confidence) + " outside [0,1]");
  const auto& b = d.bbox;
  if (!std::isfinite(b.x_min) || !std::isfinite(b.y_min) || !std::isfinite(b.x_max) ||
      !std::isfinite(b.y_max))
    throw DomainError("bounding box has non-finite coordinates");
  if (!b.valid()) throw DomainError("bounding box has x_min > x_max or y_min > y_max");
}

FrameListSource::FrameListSource(std::vector<Frame> frames) : frames_(std::move(frames)) {
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    if (i > 0 && frames_[i].meta.frame_id <= frames_[i - 1].meta.frame_id)
      throw DataError("frame ids must be strictly increasing");
    for (const auto& d : frames_[i].detections)
      if (d.frame_id != frames_[i].meta.frame_id)
        throw DataError("detection frame id does not match its frame");
  }
}

std::optional<Frame> FrameListSource::next() {
  if (pos_ >= frames_.size()) return std::nullopt;
  return frames_[pos_++];
}

DumpSource::DumpSource(std::filesystem::path path, DumpOptions options)
    : path_(std::move(path)), options_(std::move(options)), in_(path_) {
  if (!in_) throw DataError("cannot open detection dump " + path_.string());
  if (options_.width <= 0 || options_.height <= 0)
    throw ConfigError("frame width and height must be positive");
}

namespace {

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw std::invalid_argument(std::string("missing field \"") + key + "\"");
  return *it;
}

std::int64_t require_int(const json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_number_integer())
    throw std::invalid_argument(std::string("field \"") + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

double require_number(const json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_number()) throw std::invalid_argument(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

}  // namespace

std::optional<DumpSource::Record> DumpSource::read_record() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path_.string();
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where, line_no_, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(where, line_no_, "record is not a JSON object");
    Record rec{};
    try {
      rec.detection.frame_id = require_int(obj, "frame");
      rec.ts_ms = require_int(obj, "ts_ms");
      const auto& cls = require(obj, "class");
      if (!cls.is_string()) throw std::invalid_argument("field \"class\" must be a string");
      rec.detection.class_label = cls.get<std::string>();
      rec.detection.bbox = {require_number(obj, "x1"), require_number(obj, "y1"),
                            require_number(obj, "x2"), require_number(obj, "y2")};
      rec.detection.confidence = require_number(obj, "conf");
    } catch (const std::invalid_argument& e) {
      throw ParseError(where, line_no_, e.what());
    }
    try {
      validate(rec.detection);
    } catch (const DomainError& e) {
      throw DomainError(where + ":" + std::to_string(line_no_) + ": " + e.what());
    }
    if (rec.detection.frame_id < 0)
      throw DomainError(where + ":" + std::to_string(line_no_) + ": negative frame id");
    if (last_frame_ && rec.detection.frame_id < *last_frame_)
      throw ParseError(where, line_no_, "frame ids must be non-decreasing");
    last_frame_ = rec.detection.frame_id;
    return rec;
  }
  return std::nullopt;
}

std::optional<Frame> DumpSource::next() {
  if (!pending_) pending_ = read_record();
  if (!pending_) return std::nullopt;
  Frame frame;
  frame.meta = {options_.source_id, pending_->detection.frame_id, pending_->ts_ms, options_.width,
                options_.height};
  frame.detections.push_back(std::move(pending_->detection));
  pending_.reset();
  while (auto rec = read_record()) {
    if (rec->detection.frame_id != frame.meta.frame_id) {
      pending_ = std::move(rec);
      break;
    }
    frame.detections.push_back(std::move(rec->detection));
  }
  return frame;
}

std::unique_ptr<DetectionSource> read_dump(const std::filesystem::path& path,
                                           const DumpOptions& options) {
  return std::make_unique<DumpSource>(path, options);
}

std::vector<Frame> collect(DetectionSource& source) {
  std::vector<Frame> frames;
  while (auto f = source.next()) frames.push_back(std::move(*f));
  return frames;
}

std::string to_dump_line(const Detection& d, std::int64_t ts_ms) {
  nlohmann::ordered_json obj;
  obj["frame"] = d.frame_id;
  obj["ts_ms"] = ts_ms;
  obj["class"] = d.class_label;
  obj["x1"] = d.bbox.x_min;
  obj["y1"] = d.bbox.y_min;
  obj["x2"] = d.bbox.x_max;
  obj["y2"] = d.bbox.y_max;
  obj["conf"] = d.confidence;
  return obj.dump();
}

void write_dump(std::ostream& out, const std::vector<Frame>& frames) {
  for (const auto& f : frames)
    for (const auto& d : f.detections) out << to_dump_line(d, f.meta.timestamp_ms) << '\n';
}

void write_dump(const std::filesystem::path& path, const std::vector<Frame>& frames) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_dump(out, frames);
}

}  // namespace vsa
