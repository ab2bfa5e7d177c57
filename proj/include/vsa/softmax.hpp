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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace vsa {

/// Embedding vectors with labels, one row per record.
struct FeatureSet {
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  Eigen::MatrixXd features;  // n x d

  std::size_t size() const { return ids.size(); }
};

/// CSV "id,label,v1,...,vd"; an optional header row is skipped.
FeatureSet load_feature_csv(const std::filesystem::path& path);

/// Multinomial logistic regression p = softmax(W x + b).
struct SoftmaxModel {
  Eigen::MatrixXd weights;  // K x d
  Eigen::VectorXd bias;     // K
  std::vector<std::string> classes;

  static SoftmaxModel zeros(std::vector<std::string> classes, Eigen::Index dim);

  Eigen::Index num_classes() const { return static_cast<Eigen::Index>(classes.size()); }
  Eigen::Index dim() const { return weights.cols(); }
  /// Index of `label`, or nullopt when outside the vocabulary.
  std::optional<Eigen::Index> class_index(const std::string& label) const;

  void validate() const;
};

struct LossAndGrad {
  double loss = 0.0;
  Eigen::MatrixXd grad_weights;
  Eigen::VectorXd grad_bias;
};

/// Row-wise numerically stable softmax of logits (n x K).
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

/// Mean cross-entropy plus (lambda/2)||W||^2 with exact gradients. The bias
/// is not regularized. `targets` are class indices.
LossAndGrad loss_and_grad(const SoftmaxModel& model, const Eigen::MatrixXd& x,
                          const std::vector<Eigen::Index>& targets, double l2_lambda);

/// Maps labels to class indices; throws DomainError on an unknown label.
std::vector<Eigen::Index> encode_labels(const SoftmaxModel& model,
                                        const std::vector<std::string>& labels);

struct TrainConfig {
  double learning_rate = 0.1;
  double l2_lambda = 1e-4;
  int max_epochs = 200;
  double convergence_tol = 1e-6;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainResult {
  SoftmaxModel model;
  std::vector<double> loss_history;  // objective before each update, then final
  int epochs = 0;
};

/// Full-batch descent from W = 0, b = 0. Each epoch takes a gradient step on
/// the cross-entropy term and applies the L2 term as its proximal map,
/// W <- (W - lr * grad_ce) / (1 + lr * lambda), which stays stable for any
/// lambda. Stops after max_epochs or when |delta loss| < convergence_tol.
/// Classes are the sorted distinct labels.
TrainResult train(const FeatureSet& data, const TrainConfig& config);

struct Prediction {
  std::optional<std::string> label;  // empty when rejected
  Eigen::Index index = 0;
  Eigen::VectorXd probabilities;
};

/// Argmax of softmax(W x + b), ties to the lowest class index. With a
/// rejection threshold, predictions whose top probability falls below it
/// carry no label.
Prediction predict(const SoftmaxModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                   std::optional<double> reject_below = std::nullopt);

/// {"classes": [...], "d": int, "W": [row-major K*d], "b": [...]}
nlohmann::ordered_json to_json(const SoftmaxModel& model);
SoftmaxModel softmax_model_from_json(const nlohmann::json& j);

struct ClassificationReport {
  double accuracy = 0.0;
  std::vector<std::string> classes;
  Eigen::VectorXd precision;
  Eigen::VectorXd recall;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> confusion;  // rows: truth
  std::size_t rejected = 0;
};

ClassificationReport evaluate_classifier(const SoftmaxModel& model, const FeatureSet& data,
                                         std::optional<double> reject_below = std::nullopt);
nlohmann::ordered_json to_json(const ClassificationReport& report);

}  // namespace vsa
