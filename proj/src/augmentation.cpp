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

#include "vsa/augmentation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include <Eigen/LU>

#include "csv.hpp"
#include "vsa/error.hpp"

namespace vsa {

void AugmentationBounds::validate() const {
  if (!(max_rotation_deg >= 0.0 && max_rotation_deg <= kRotationCapDeg))
    throw ConfigError("max_rotation_deg must lie in [0, 10]");
  if (!(flip_probability >= 0.0 && flip_probability <= 1.0))
    throw ConfigError("flip_probability must lie in [0,1]");
  if (!(max_shear >= 0.0 && max_shear < 1.0)) throw ConfigError("max_shear must lie in [0,1)");
  if (!(color_scale_min > 0.0 && color_scale_min <= color_scale_max))
    throw ConfigError("color scale range must be positive and ordered");
  if (!(color_offset_min <= color_offset_max)) throw ConfigError("color offset range must be ordered");
}

AugmentationParams sample_params(Rng& rng, const AugmentationBounds& bounds) {
  bounds.validate();
  AugmentationParams p;
  const double max_rot = std::min(bounds.max_rotation_deg, AugmentationBounds::kRotationCapDeg);
  p.rotation_deg = std::clamp(rng.uniform(-max_rot, max_rot), -max_rot, max_rot);
  p.shear = rng.uniform(-bounds.max_shear, bounds.max_shear);
  p.flip = rng.bernoulli(bounds.flip_probability);
  for (int c = 0; c < 3; ++c) {
    p.jitter.scale(c) = rng.uniform(bounds.color_scale_min, bounds.color_scale_max);
    p.jitter.offset(c) = rng.uniform(bounds.color_offset_min, bounds.color_offset_max);
  }
  return p;
}

AffineTransform compose(const AugmentationParams& params, int width, int height) {
  const double theta = params.rotation_deg * std::numbers::pi / 180.0;
  Eigen::Matrix2d rot;
  rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  Eigen::Matrix2d shear;
  shear << 1.0, params.shear, 0.0, 1.0;
  Eigen::Matrix2d flip = Eigen::Matrix2d::Identity();
  if (params.flip) flip(0, 0) = -1.0;
  AffineTransform t;
  t.A = rot * shear * flip;
  const Eigen::Vector2d c{(width - 1) / 2.0, (height - 1) / 2.0};
  t.B = c - t.A * c;
  return t;
}

Image apply_transform(const Image& img, const AffineTransform& t, const ColorJitter& jitter) {
  const double det = t.A.determinant();
  if (!(std::abs(det) > 1e-12) || !std::isfinite(det))
    throw DomainError("affine transform is singular");
  const Eigen::Matrix2d inv = t.A.inverse();
  Image out(img.width, img.height, img.channels);

  const auto sample = [&img](int x, int y, int c) -> double {
    if (x < 0 || y < 0 || x >= img.width || y >= img.height) return 0.0;
    return img.at(x, y, c);
  };

  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const Eigen::Vector2d src = inv * (Eigen::Vector2d(x, y) - t.B);
      const double fx0 = std::floor(src.x());
      const double fy0 = std::floor(src.y());
      const bool outside = fx0 < -1.0 || fy0 < -1.0 || fx0 > img.width || fy0 > img.height;
      const int x0 = static_cast<int>(std::clamp(fx0, -2.0, img.width + 1.0));
      const int y0 = static_cast<int>(std::clamp(fy0, -2.0, img.height + 1.0));
      const double ax = src.x() - fx0;
      const double ay = src.y() - fy0;
      for (int c = 0; c < img.channels; ++c) {
        double v = 0.0;
        if (!outside) {
          v = (1.0 - ax) * (1.0 - ay) * sample(x0, y0, c);
          if (ax > 0.0) v += ax * (1.0 - ay) * sample(x0 + 1, y0, c);
          if (ay > 0.0) v += (1.0 - ax) * ay * sample(x0, y0 + 1, c);
          if (ax > 0.0 && ay > 0.0) v += ax * ay * sample(x0 + 1, y0 + 1, c);
        }
        v = v * jitter.scale(c) + jitter.offset(c);
        out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return out;
}

std::map<std::string, std::size_t> DatasetManifest::class_counts() const {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) ++counts[r.class_label];
  return counts;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  DatasetManifest m;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::blank(line)) continue;
    auto fields = csv::split(line);
    if (fields.size() < 2) throw ParseError(path.string(), line_no, "expected path,class");
    std::string p{csv::trim(fields[0])};
    std::string cls{csv::trim(fields[1])};
    if (first && p == "path" && cls == "class") {
      first = false;
      continue;
    }
    first = false;
    if (p.empty() || cls.empty()) throw ParseError(path.string(), line_no, "empty path or class");
    if (!seen.insert(p).second) throw ParseError(path.string(), line_no, "duplicate path " + p);
    m.records.push_back({std::move(p), std::move(cls), std::nullopt, std::nullopt});
  }
  return m;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << "path,class,source,rotation_deg,shear,flip,scale_r,scale_g,scale_b,offset_r,offset_g,"
         "offset_b\n";
  for (const auto& r : manifest.records) {
    buf << csv::escape(r.path) << ',' << csv::escape(r.class_label) << ',';
    if (r.source && r.params) {
      const auto& p = *r.params;
      buf << csv::escape(*r.source) << ',' << p.rotation_deg << ',' << p.shear << ','
          << (p.flip ? 1 : 0);
      for (int c = 0; c < 3; ++c) buf << ',' << p.jitter.scale(c);
      for (int c = 0; c < 3; ++c) buf << ',' << p.jitter.offset(c);
    } else {
      buf << ",,,,,,,,,";
    }
    buf << '\n';
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write manifest " + path.string());
  out << buf.str();
}

BalancePlan balance(const DatasetManifest& manifest, const AugmentationBounds& bounds, Rng& rng,
                    const std::filesystem::path& augmented_dir) {
  bounds.validate();
  if (manifest.records.empty()) throw DataError("cannot balance an empty manifest");

  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < manifest.records.size(); ++i)
    by_class[manifest.records[i].class_label].push_back(i);

  BalancePlan plan;
  const double mean = static_cast<double>(manifest.records.size()) / static_cast<double>(by_class.size());
  plan.target = static_cast<std::size_t>(std::llround(mean));

  std::map<std::string, std::size_t> name_counter;
  for (const auto& [label, members] : by_class) {
    ClassBalance report;
    report.before = members.size();
    if (members.size() > plan.target) {
      // Partial Fisher-Yates over positions, then restore input order.
      std::vector<std::size_t> pos(members.size());
      for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = i;
      for (std::size_t i = 0; i < plan.target; ++i) {
        const std::size_t j = i + rng.below(pos.size() - i);
        std::swap(pos[i], pos[j]);
      }
      pos.resize(plan.target);
      std::sort(pos.begin(), pos.end());
      for (auto p : pos) plan.manifest.records.push_back(manifest.records[members[p]]);
      report.dropped = members.size() - plan.target;
    } else {
      for (auto idx : members) plan.manifest.records.push_back(manifest.records[idx]);
      for (std::size_t k = members.size(); k < plan.target; ++k) {
        const auto& src = manifest.records[members[rng.below(members.size())]];
        const std::filesystem::path src_path(src.path);
        const std::string key = src_path.stem().string() + src_path.extension().string();
        std::ostringstream name;
        name << src_path.stem().string() << "__aug" << std::setw(3) << std::setfill('0')
             << name_counter[key]++ << src_path.extension().string();
        ManifestRecord rec;
        rec.path = (augmented_dir / name.str()).string();
        rec.class_label = label;
        rec.source = src.path;
        rec.params = sample_params(rng, bounds);
        plan.manifest.records.push_back(std::move(rec));
        ++report.generated;
      }
    }
    report.after = report.before - report.dropped + report.generated;
    plan.report[label] = report;
  }
  return plan;
}

void materialize(const BalancePlan& plan, const std::filesystem::path& input_root) {
  for (const auto& rec : plan.manifest.records) {
    if (!rec.source || !rec.params) continue;
    const std::filesystem::path src = std::filesystem::path(*rec.source).is_absolute()
                                          ? std::filesystem::path(*rec.source)
                                          : input_root / *rec.source;
    const Image img = read_pnm(src);
    const auto t = compose(*rec.params, img.width, img.height);
    write_pnm(rec.path, apply_transform(img, t, rec.params->jitter));
  }
}

nlohmann::ordered_json to_json(const BalancePlan& plan) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [label, r] : plan.report)
    j[label] = {{"before", r.before}, {"after", r.after}, {"generated", r.generated}, {"dropped", r.dropped}};
  return j;
}

}  // namespace vsa
