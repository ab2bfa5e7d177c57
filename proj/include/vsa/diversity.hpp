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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vsa/image.hpp"

namespace vsa {

/// Non-negative, L1-normalized frame descriptor (all-zero allowed).
using FrameSignature = Eigen::VectorXd;

/// 8x8x8 RGB color histogram (d = 512), L1-normalized. Gray images use the
/// same value for all three channels.
FrameSignature color_histogram(const Image& img, int bins_per_channel = 8);

/// Scales a non-negative vector to unit L1 norm; zero stays zero. Throws
/// DomainError on negative or non-finite components.
FrameSignature normalize_signature(const Eigen::Ref<const Eigen::VectorXd>& v);

/// 1 - 0.5 * ||a - b||_1, in [0,1] for normalized inputs. Throws DomainError
/// on dimension mismatch.
double similarity(const Eigen::Ref<const Eigen::VectorXd>& a,
                  const Eigen::Ref<const Eigen::VectorXd>& b);

/// Candidate frames V = {0..n-1}, one signature per row.
struct GroundSet {
  std::vector<std::string> item_ids;
  Eigen::MatrixXd signatures;  // n x d
  double sampling_fps = 1.0;

  std::size_t size() const { return item_ids.size(); }
};

/// CSV rows "item_id, v1, ..., vd"; an optional header row is skipped.
/// Rows are L1-normalized on load.
GroundSet load_signature_csv(const std::filesystem::path& path);

/// PPM/PGM files in lexicographic filename order, one color histogram each.
GroundSet ground_set_from_images(const std::filesystem::path& dir, double sampling_fps = 1.0);

/// Pairwise similarities over a ground set. Precomputed (n x n) up to
/// `precompute_limit` items, computed on demand above it.
class SimilarityKernel {
 public:
  static constexpr std::size_t kDefaultPrecomputeLimit = 20000;

  explicit SimilarityKernel(const GroundSet& ground,
                            std::size_t precompute_limit = kDefaultPrecomputeLimit);
  /// Direct matrix, used by tests and small hand-built instances.
  explicit SimilarityKernel(Eigen::MatrixXd matrix);

  double operator()(std::size_t i, std::size_t j) const;
  std::size_t size() const { return n_; }
  bool precomputed() const { return matrix_.size() > 0 || n_ == 0; }

 private:
  std::size_t n_ = 0;
  Eigen::MatrixXd matrix_;
  const Eigen::MatrixXd* signatures_ = nullptr;
};

enum class DiversityKind { FacilityLocation, SaturatedCoverage };

struct DiversityModel {
  DiversityKind kind = DiversityKind::FacilityLocation;
  double alpha = 0.5;  // SaturatedCoverage only, in (0,1]

  void validate() const;
};

/// Incremental state of f over a growing set X.
///   FacilityLocation:  f(X) = sum_v max_{x in X} sim(v,x)
///   SaturatedCoverage: f(X) = sum_v min(sum_{x in X} sim(v,x), alpha * sum_u sim(v,u))
class DiversityState {
 public:
  DiversityState(const DiversityModel& model, const SimilarityKernel& kernel);

  /// f(X + j) - f(X). Counts one evaluation.
  double gain(std::size_t j) const;
  void add(std::size_t j);
  double value() const;
  std::size_t evaluations() const { return evaluations_; }

 private:
  DiversityModel model_;
  const SimilarityKernel* kernel_;
  Eigen::VectorXd coverage_;
  Eigen::VectorXd cap_;
  mutable std::size_t evaluations_ = 0;
};

/// f(X). Throws DomainError when an element lies outside V.
double evaluate(const DiversityModel& model, const SimilarityKernel& kernel,
                std::span<const std::size_t> subset);

struct Selection {
  std::vector<std::size_t> items;  // pick order
  std::vector<double> gains;       // marginal gain at pick time
  std::vector<double> cumulative;  // f after each pick
  std::size_t evaluations = 0;     // marginal-gain evaluations
};

/// Picks min(k, n) items, each with maximal marginal gain at its turn;
/// ties go to the lowest index.
Selection greedy_select(const DiversityModel& model, const SimilarityKernel& kernel, std::size_t k);

/// Same output as greedy_select, using stale gains as upper bounds in a
/// max-heap and re-evaluating only the popped candidate.
Selection lazy_greedy_select(const DiversityModel& model, const SimilarityKernel& kernel,
                             std::size_t k);

/// CSV "rank,item_id,marginal_gain,cumulative_f" with a header row.
void write_selection_csv(std::ostream& out, const GroundSet& ground, const Selection& sel);

}  // namespace vsa
