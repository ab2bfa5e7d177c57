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
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vsa/geometry.hpp"

namespace vsa {

/// All detections of one frame.
struct Frame {
  FrameMeta meta;
  std::vector<Detection> detections;
};

/// Single-consumer, frame-ordered stream of detections. Implementations
/// guarantee strictly increasing frame_id and that every detection's
/// frame_id equals its group's.
class DetectionSource {
 public:
  virtual ~DetectionSource() = default;
  virtual std::optional<Frame> next() = 0;
};

/// Source over an in-memory frame list. Validates ordering on construction.
class FrameListSource final : public DetectionSource {
 public:
  explicit FrameListSource(std::vector<Frame> frames);
  std::optional<Frame> next() override;

 private:
  std::vector<Frame> frames_;
  std::size_t pos_ = 0;
};

/// Frame geometry is not part of the dump format; readers attach it.
struct DumpOptions {
  std::string source_id = "dump";
  int width = 1920;
  int height = 1080;
};

/// Streams a JSONL detection dump. Each line is exactly
///   {"frame": int, "ts_ms": int, "class": string,
///    "x1": num, "y1": num, "x2": num, "y2": num, "conf": num}
/// Lines of the same frame are grouped; "frame" must be non-decreasing.
/// Blank lines are skipped. Errors carry the 1-based line number.
class DumpSource final : public DetectionSource {
 public:
  DumpSource(std::filesystem::path path, DumpOptions options = {});
  std::optional<Frame> next() override;

 private:
  struct Record {
    std::int64_t ts_ms;
    Detection detection;
  };
  std::optional<Record> read_record();

  std::filesystem::path path_;
  DumpOptions options_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
  std::optional<Record> pending_;
  std::optional<std::int64_t> last_frame_;
};

std::unique_ptr<DetectionSource> read_dump(const std::filesystem::path& path,
                                           const DumpOptions& options = {});

/// Drains a source into memory.
std::vector<Frame> collect(DetectionSource& source);

/// One dump line (no trailing newline) for a detection at the given timestamp.
std::string to_dump_line(const Detection& d, std::int64_t ts_ms);

/// Writes every detection of every frame as dump lines. Frames without
/// detections produce no output.
void write_dump(std::ostream& out, const std::vector<Frame>& frames);
void write_dump(const std::filesystem::path& path, const std::vector<Frame>& frames);

}  // namespace vsa
