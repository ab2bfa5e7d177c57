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

#include "vsa/softmax.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "csv.hpp"
#include "vsa/error.hpp"

namespace vsa {

FeatureSet load_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open feature file " + path.string());
  FeatureSet set;
  std::vector<Eigen::VectorXd> rows;
  std::optional<std::size_t> dim;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::blank(line)) continue;
    const auto fields = csv::split(line);
    if (fields.size() < 3) throw ParseError(path.string(), line_no, "expected id,label,v1..vd");
    if (rows.empty() && !csv::to_double(fields[2])) continue;  // header
    const std::size_t d = fields.size() - 2;
    if (dim && *dim != d)
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(*dim) + " values, got " + std::to_string(d));
    dim = d;
    Eigen::VectorXd v(d);
    for (std::size_t k = 0; k < d; ++k) {
      const auto x = csv::to_double(fields[k + 2]);
      if (!x || !std::isfinite(*x))
        throw ParseError(path.string(), line_no, "bad number '" + fields[k + 2] + "'");
      v(k) = *x;
    }
    const std::string label{csv::trim(fields[1])};
    if (label.empty()) throw ParseError(path.string(), line_no, "empty label");
    set.ids.emplace_back(csv::trim(fields[0]));
    set.labels.push_back(label);
    rows.push_back(std::move(v));
  }
  set.features.resize(static_cast<Eigen::Index>(rows.size()), dim.value_or(0));
  for (std::size_t i = 0; i < rows.size(); ++i) set.features.row(i) = rows[i].transpose();
  return set;
}

SoftmaxModel SoftmaxModel::zeros(std::vector<std::string> classes, Eigen::Index dim) {
  SoftmaxModel m;
  m.weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(classes.size()), dim);
  m.bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(classes.size()));
  m.classes = std::move(classes);
  m.validate();
  return m;
}

std::optional<Eigen::Index> SoftmaxModel::class_index(const std::string& label) const {
  const auto it = std::find(classes.begin(), classes.end(), label);
  if (it == classes.end()) return std::nullopt;
  return static_cast<Eigen::Index>(it - classes.begin());
}

void SoftmaxModel::validate() const {
  if (classes.size() < 2) throw DomainError("softmax model needs at least 2 classes");
  if (std::set<std::string>(classes.begin(), classes.end()).size() != classes.size())
    throw DomainError("softmax model class list has duplicates");
  if (weights.rows() != num_classes() || bias.size() != num_classes())
    throw DomainError("softmax model shapes do not match the class count");
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd p = logits.colwise() - logits.rowwise().maxCoeff();
  p = p.array().exp().matrix();
  p.array().colwise() /= p.rowwise().sum().array();
  return p;
}

std::vector<Eigen::Index> encode_labels(const SoftmaxModel& model,
                                        const std::vector<std::string>& labels) {
  std::vector<Eigen::Index> out;
  out.reserve(labels.size());
  for (const auto& l : labels) {
    const auto idx = model.class_index(l);
    if (!idx) throw DomainError("label '" + l + "' is not in the model vocabulary");
    out.push_back(*idx);
  }
  return out;
}

LossAndGrad loss_and_grad(const SoftmaxModel& model, const Eigen::MatrixXd& x,
                          const std::vector<Eigen::Index>& targets, double l2_lambda) {
  if (x.cols() != model.dim())
    throw DomainError("feature dimension " + std::to_string(x.cols()) + " does not match model " +
                      std::to_string(model.dim()));
  if (static_cast<std::size_t>(x.rows()) != targets.size())
    throw DomainError("feature rows and label count differ");
  if (x.rows() == 0) throw DomainError("loss of an empty batch is undefined");
  const Eigen::Index n = x.rows();
  const Eigen::Index k = model.num_classes();
  for (auto t : targets)
    if (t < 0 || t >= k) throw DomainError("label index outside the vocabulary");

  const Eigen::MatrixXd logits = (x * model.weights.transpose()).rowwise() + model.bias.transpose();
  const Eigen::MatrixXd shifted = logits.colwise() - logits.rowwise().maxCoeff();
  const Eigen::VectorXd log_norm = shifted.array().exp().rowwise().sum().log();
  Eigen::MatrixXd residual = softmax_rows(logits);  // becomes P - Y

  double ce = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto t = targets[static_cast<std::size_t>(i)];
    ce += log_norm(i) - shifted(i, t);
    residual(i, t) -= 1.0;
  }

  LossAndGrad out;
  out.loss = ce / static_cast<double>(n) + 0.5 * l2_lambda * model.weights.squaredNorm();
  out.grad_weights = residual.transpose() * x / static_cast<double>(n) + l2_lambda * model.weights;
  out.grad_bias = residual.colwise().sum().transpose() / static_cast<double>(n);
  return out;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (!(l2_lambda >= 0.0)) throw ConfigError("l2_lambda must be non-negative");
  if (max_epochs < 1) throw ConfigError("max_epochs must be positive");
  if (!(convergence_tol > 0.0)) throw ConfigError("convergence_tol must be positive");
}

TrainResult train(const FeatureSet& data, const TrainConfig& config) {
  config.validate();
  if (data.size() == 0) throw DataError("cannot train on an empty dataset");
  if (data.features.rows() != static_cast<Eigen::Index>(data.size()) ||
      data.labels.size() != data.size())
    throw DataError("feature rows, ids and labels are inconsistent");
  std::set<std::string> distinct(data.labels.begin(), data.labels.end());
  if (distinct.size() < 2) throw DataError("training needs at least 2 distinct labels");
  if (data.size() < distinct.size()) throw DataError("training needs at least one row per class");

  TrainResult result;
  result.model = SoftmaxModel::zeros({distinct.begin(), distinct.end()}, data.features.cols());
  const auto targets = encode_labels(result.model, data.labels);
  const double lr = config.learning_rate;
  const double lambda = config.l2_lambda;

  double previous = loss_and_grad(result.model, data.features, targets, lambda).loss;
  result.loss_history.push_back(previous);
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    // Cross-entropy gradient only; the L2 term is handled by the shrink below.
    const auto g = loss_and_grad(result.model, data.features, targets, 0.0);
    result.model.weights = (result.model.weights - lr * g.grad_weights) / (1.0 + lr * lambda);
    result.model.bias -= lr * g.grad_bias;
    const double current = loss_and_grad(result.model, data.features, targets, lambda).loss;
    result.loss_history.push_back(current);
    result.epochs = epoch + 1;
    if (std::abs(previous - current) < config.convergence_tol) break;
    previous = current;
  }
  return result;
}

Prediction predict(const SoftmaxModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                   std::optional<double> reject_below) {
  if (x.size() != model.dim())
    throw DomainError("feature dimension " + std::to_string(x.size()) + " does not match model " +
                      std::to_string(model.dim()));
  const Eigen::VectorXd logits = model.weights * x + model.bias;
  const Eigen::VectorXd shifted = (logits.array() - logits.maxCoeff()).exp();
  Prediction p;
  p.probabilities = shifted / shifted.sum();
  p.index = 0;
  for (Eigen::Index k = 1; k < p.probabilities.size(); ++k)
    if (p.probabilities(k) > p.probabilities(p.index)) p.index = k;
  if (!reject_below || p.probabilities(p.index) >= *reject_below)
    p.label = model.classes[static_cast<std::size_t>(p.index)];
  return p;
}

nlohmann::ordered_json to_json(const SoftmaxModel& model) {
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(model.weights.size()));
  for (Eigen::Index r = 0; r < model.weights.rows(); ++r)
    for (Eigen::Index c = 0; c < model.weights.cols(); ++c) w.push_back(model.weights(r, c));
  std::vector<double> b(model.bias.data(), model.bias.data() + model.bias.size());
  nlohmann::ordered_json j;
  j["classes"] = model.classes;
  j["d"] = model.dim();
  j["W"] = w;
  j["b"] = b;
  return j;
}

SoftmaxModel softmax_model_from_json(const nlohmann::json& j) {
  SoftmaxModel m;
  try {
    m.classes = j.at("classes").get<std::vector<std::string>>();
    const auto d = j.at("d").get<Eigen::Index>();
    const auto w = j.at("W").get<std::vector<double>>();
    const auto b = j.at("b").get<std::vector<double>>();
    const auto k = static_cast<Eigen::Index>(m.classes.size());
    if (d < 0 || static_cast<Eigen::Index>(w.size()) != k * d || static_cast<Eigen::Index>(b.size()) != k)
      throw DomainError("model file: W must hold K*d values and b K values");
    m.weights.resize(k, d);
    for (Eigen::Index r = 0; r < k; ++r)
      for (Eigen::Index c = 0; c < d; ++c) m.weights(r, c) = w[static_cast<std::size_t>(r * d + c)];
    m.bias = Eigen::Map<const Eigen::VectorXd>(b.data(), k);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
  m.validate();
  return m;
}

ClassificationReport evaluate_classifier(const SoftmaxModel& model, const FeatureSet& data,
                                         std::optional<double> reject_below) {
  const auto truth = encode_labels(model, data.labels);
  const Eigen::Index k = model.num_classes();
  ClassificationReport rep;
  rep.classes = model.classes;
  rep.confusion = decltype(rep.confusion)::Zero(k, k);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = predict(model, data.features.row(static_cast<Eigen::Index>(i)).transpose(), reject_below);
    if (!p.label) {
      ++rep.rejected;
      continue;
    }
    rep.confusion(truth[i], p.index) += 1;
    if (p.index == truth[i]) ++correct;
  }
  rep.accuracy = data.size() ? static_cast<double>(correct) / static_cast<double>(data.size()) : 0.0;
  rep.precision = Eigen::VectorXd::Zero(k);
  rep.recall = Eigen::VectorXd::Zero(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto predicted = rep.confusion.col(c).sum();
    std::int64_t actual = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) actual += truth[i] == c ? 1 : 0;
    if (predicted > 0) rep.precision(c) = static_cast<double>(rep.confusion(c, c)) / predicted;
    if (actual > 0) rep.recall(c) = static_cast<double>(rep.confusion(c, c)) / actual;
  }
  return rep;
}

nlohmann::ordered_json to_json(const ClassificationReport& rep) {
  nlohmann::ordered_json j;
  j["accuracy"] = rep.accuracy;
  nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < rep.classes.size(); ++c)
    per_class[rep.classes[c]] = {{"precision", rep.precision(static_cast<Eigen::Index>(c))},
                                 {"recall", rep.recall(static_cast<Eigen::Index>(c))}};
  j["per_class"] = per_class;
  nlohmann::ordered_json confusion = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < rep.confusion.rows(); ++r) {
    std::vector<std::int64_t> row(rep.confusion.cols());
    for (Eigen::Index c = 0; c < rep.confusion.cols(); ++c) row[c] = rep.confusion(r, c);
    confusion.push_back(row);
  }
  j["classes"] = rep.classes;
  j["confusion_matrix"] = confusion;
  j["rejected"] = rep.rejected;
  return j;
}

}  // namespace vsa
