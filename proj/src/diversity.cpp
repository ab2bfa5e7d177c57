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

#include "vsa/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <queue>
#include <sstream>

#include "csv.hpp"
#include "vsa/error.hpp"

namespace vsa {

FrameSignature color_histogram(const Image& img, int bins_per_channel) {
  if (bins_per_channel < 1 || bins_per_channel > 256)
    throw DomainError("bins_per_channel must lie in [1,256]");
  const int b = bins_per_channel;
  FrameSignature hist = FrameSignature::Zero(static_cast<Eigen::Index>(b) * b * b);
  const auto bin = [b](std::uint8_t v) { return static_cast<int>(v) * b / 256; };
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const int r = bin(img.at(x, y, 0));
      const int g = img.channels == 3 ? bin(img.at(x, y, 1)) : r;
      const int bl = img.channels == 3 ? bin(img.at(x, y, 2)) : r;
      hist((r * b + g) * b + bl) += 1.0;
    }
  }
  return normalize_signature(hist);
}

FrameSignature normalize_signature(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (!v.allFinite()) throw DomainError("signature has non-finite components");
  if ((v.array() < 0.0).any()) throw DomainError("signature has negative components");
  const double total = v.sum();
  if (total == 0.0) return v;
  return v / total;
}

double similarity(const Eigen::Ref<const Eigen::VectorXd>& a,
                  const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size())
    throw DomainError("signature dimensions differ: " + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()));
  return 1.0 - 0.5 * (a - b).cwiseAbs().sum();
}

GroundSet load_signature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open signature file " + path.string());
  GroundSet ground;
  std::vector<Eigen::VectorXd> rows;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> dim;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::blank(line)) continue;
    const auto fields = csv::split(line);
    if (fields.size() < 2) throw ParseError(path.string(), line_no, "expected item_id and values");
    if (rows.empty() && ground.item_ids.empty() && !csv::to_double(fields[1])) continue;  // header
    const std::size_t d = fields.size() - 1;
    if (dim && *dim != d)
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(*dim) + " values, got " + std::to_string(d));
    dim = d;
    Eigen::VectorXd v(d);
    for (std::size_t k = 0; k < d; ++k) {
      const auto x = csv::to_double(fields[k + 1]);
      if (!x) throw ParseError(path.string(), line_no, "bad number '" + fields[k + 1] + "'");
      v(k) = *x;
    }
    try {
      rows.push_back(normalize_signature(v));
    } catch (const DomainError& e) {
      throw DomainError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    ground.item_ids.emplace_back(csv::trim(fields[0]));
  }
  ground.signatures.resize(static_cast<Eigen::Index>(rows.size()), dim.value_or(0));
  for (std::size_t i = 0; i < rows.size(); ++i) ground.signatures.row(i) = rows[i].transpose();
  return ground;
}

GroundSet ground_set_from_images(const std::filesystem::path& dir, double sampling_fps) {
  if (!std::filesystem::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && is_pnm_path(entry.path())) files.push_back(entry.path());
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
  GroundSet ground;
  ground.sampling_fps = sampling_fps;
  ground.signatures.resize(static_cast<Eigen::Index>(files.size()), 512);
  for (std::size_t i = 0; i < files.size(); ++i) {
    ground.signatures.row(i) = color_histogram(read_pnm(files[i])).transpose();
    ground.item_ids.push_back(files[i].filename().string());
  }
  return ground;
}

SimilarityKernel::SimilarityKernel(const GroundSet& ground, std::size_t precompute_limit)
    : n_(ground.size()), signatures_(&ground.signatures) {
  if (n_ > precompute_limit) return;
  const auto n = static_cast<Eigen::Index>(n_);
  matrix_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    matrix_(i, i) = similarity(ground.signatures.row(i).transpose(), ground.signatures.row(i).transpose());
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double s = similarity(ground.signatures.row(i).transpose(), ground.signatures.row(j).transpose());
      matrix_(i, j) = matrix_(j, i) = s;
    }
  }
}

SimilarityKernel::SimilarityKernel(Eigen::MatrixXd matrix)
    : n_(static_cast<std::size_t>(matrix.rows())), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw DomainError("similarity matrix must be square");
  if ((matrix_.array() < 0.0).any()) throw DomainError("similarities must be non-negative");
}

double SimilarityKernel::operator()(std::size_t i, std::size_t j) const {
  if (matrix_.size() > 0) return matrix_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return similarity(signatures_->row(static_cast<Eigen::Index>(i)).transpose(),
                    signatures_->row(static_cast<Eigen::Index>(j)).transpose());
}

void DiversityModel::validate() const {
  if (kind == DiversityKind::SaturatedCoverage && !(alpha > 0.0 && alpha <= 1.0))
    throw ConfigError("saturation alpha must lie in (0,1]");
}

DiversityState::DiversityState(const DiversityModel& model, const SimilarityKernel& kernel)
    : model_(model), kernel_(&kernel), coverage_(Eigen::VectorXd::Zero(kernel.size())) {
  model_.validate();
  if (model_.kind == DiversityKind::SaturatedCoverage) {
    const std::size_t n = kernel.size();
    cap_.resize(static_cast<Eigen::Index>(n));
    for (std::size_t v = 0; v < n; ++v) {
      double total = 0.0;
      for (std::size_t u = 0; u < n; ++u) total += kernel(v, u);
      cap_(v) = model_.alpha * total;
    }
  }
}

double DiversityState::gain(std::size_t j) const {
  ++evaluations_;
  const std::size_t n = kernel_->size();
  double g = 0.0;
  if (model_.kind == DiversityKind::FacilityLocation) {
    for (std::size_t v = 0; v < n; ++v) g += std::max(0.0, (*kernel_)(v, j) - coverage_(v));
  } else {
    for (std::size_t v = 0; v < n; ++v) {
      const double before = std::min(coverage_(v), cap_(v));
      const double after = std::min(coverage_(v) + (*kernel_)(v, j), cap_(v));
      g += after - before;
    }
  }
  return g;
}

void DiversityState::add(std::size_t j) {
  const std::size_t n = kernel_->size();
  if (model_.kind == DiversityKind::FacilityLocation) {
    for (std::size_t v = 0; v < n; ++v) coverage_(v) = std::max(coverage_(v), (*kernel_)(v, j));
  } else {
    for (std::size_t v = 0; v < n; ++v) coverage_(v) += (*kernel_)(v, j);
  }
}

double DiversityState::value() const {
  if (model_.kind == DiversityKind::FacilityLocation) return coverage_.sum();
  return coverage_.cwiseMin(cap_).sum();
}

double evaluate(const DiversityModel& model, const SimilarityKernel& kernel,
                std::span<const std::size_t> subset) {
  DiversityState state(model, kernel);
  for (auto j : subset) {
    if (j >= kernel.size())
      throw DomainError("element " + std::to_string(j) + " outside the ground set of size " +
                        std::to_string(kernel.size()));
  }
  // Set semantics: repeated elements contribute once.
  std::vector<std::size_t> unique(subset.begin(), subset.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  for (auto j : unique) state.add(j);
  return state.value();
}

namespace {

void record_pick(Selection& sel, DiversityState& state, std::size_t j, double gain) {
  state.add(j);
  sel.items.push_back(j);
  sel.gains.push_back(gain);
  sel.cumulative.push_back(state.value());
}

}  // namespace

Selection greedy_select(const DiversityModel& model, const SimilarityKernel& kernel, std::size_t k) {
  DiversityState state(model, kernel);
  const std::size_t n = kernel.size();
  const std::size_t picks = std::min(k, n);
  std::vector<char> taken(n, 0);
  Selection sel;
  for (std::size_t round = 0; round < picks; ++round) {
    std::size_t best = n;
    double best_gain = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (taken[j]) continue;
      const double g = state.gain(j);
      if (best == n || g > best_gain) {
        best = j;
        best_gain = g;
      }
    }
    taken[best] = 1;
    record_pick(sel, state, best, best_gain);
  }
  sel.evaluations = state.evaluations();
  return sel;
}

Selection lazy_greedy_select(const DiversityModel& model, const SimilarityKernel& kernel,
                             std::size_t k) {
  struct Entry {
    double bound;
    std::size_t item;
    std::size_t round;  // round in which bound was computed
  };
  // Max-heap on bound; equal bounds pop the lowest index first.
  const auto lower_priority = [](const Entry& a, const Entry& b) {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.item > b.item;
  };
  DiversityState state(model, kernel);
  const std::size_t n = kernel.size();
  const std::size_t picks = std::min(k, n);
  Selection sel;
  if (picks == 0) return sel;

  std::vector<Entry> init;
  init.reserve(n);
  for (std::size_t j = 0; j < n; ++j) init.push_back({state.gain(j), j, 0});
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower_priority)> heap(lower_priority,
                                                                                 std::move(init));
  for (std::size_t round = 0; round < picks;) {
    Entry top = heap.top();
    heap.pop();
    if (top.round == round) {
      record_pick(sel, state, top.item, top.bound);
      ++round;
      continue;
    }
    top.bound = state.gain(top.item);
    top.round = round;
    heap.push(top);
  }
  sel.evaluations = state.evaluations();
  return sel;
}

void write_selection_csv(std::ostream& out, const GroundSet& ground, const Selection& sel) {
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << "rank,item_id,marginal_gain,cumulative_f\n";
  for (std::size_t r = 0; r < sel.items.size(); ++r)
    buf << r + 1 << ',' << csv::escape(ground.item_ids.at(sel.items[r])) << ',' << sel.gains[r]
        << ',' << sel.cumulative[r] << '\n';
  out << buf.str();
}

}  // namespace vsa
