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

#include <cmath>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "vsa/error.hpp"
#include "vsa/random.hpp"
#include "vsa/softmax.hpp"

namespace vsa {
namespace {

FeatureSet toy_set() {
  FeatureSet d;
  d.features.resize(20, 1);
  for (int i = 0; i < 20; ++i) {
    d.ids.push_back("r" + std::to_string(i));
    d.labels.push_back(i < 10 ? "A" : "B");
    d.features(i, 0) = i < 10 ? -1.0 : 1.0;
  }
  return d;
}

TEST(SoftmaxTest, ZeroModelIsUniform) {
  const auto m = SoftmaxModel::zeros({"a", "b", "c"}, 4);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 4);
  const auto lg = loss_and_grad(m, x, {0, 1, 2, 0, 1}, 0.0);
  EXPECT_NEAR(lg.loss, std::log(3.0), 1e-12);
  const auto p = predict(m, x.row(0).transpose());
  EXPECT_EQ(p.label, "a");
  EXPECT_EQ(p.index, 0);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(p.probabilities(k), 1.0 / 3.0, 1e-15);
}

TEST(SoftmaxTest, GradientMatchesFiniteDifferences) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(20));
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.below(8));
    const Eigen::Index k = 2 + static_cast<Eigen::Index>(rng.below(4));
    std::vector<std::string> classes;
    for (Eigen::Index c = 0; c < k; ++c) classes.push_back("c" + std::to_string(c));
    auto m = SoftmaxModel::zeros(classes, d);
    for (auto& v : m.weights.reshaped()) v = rng.normal();
    for (auto& v : m.bias) v = rng.normal();
    Eigen::MatrixXd x(n, d);
    for (auto& v : x.reshaped()) v = rng.normal(0, 2);
    std::vector<Eigen::Index> y;
    for (Eigen::Index i = 0; i < n; ++i) y.push_back(static_cast<Eigen::Index>(rng.below(k)));
    const double lambda = rng.uniform(0, 0.5);
    const auto lg = loss_and_grad(m, x, y, lambda);
    EXPECT_NEAR(lg.loss, oracle::softmax_objective(m.weights, m.bias, x, y, lambda), 1e-10);

    const double eps = 1e-5;
    double worst = 0;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max({1e-8, std::abs(a), std::abs(b)}); };
    for (Eigen::Index i = 0; i < m.weights.size(); ++i) {
      Eigen::MatrixXd wp = m.weights, wm = m.weights;
      wp.reshaped()(i) += eps;
      wm.reshaped()(i) -= eps;
      const double fd = (oracle::softmax_objective(wp, m.bias, x, y, lambda) -
                         oracle::softmax_objective(wm, m.bias, x, y, lambda)) / (2 * eps);
      worst = std::max(worst, rel(fd, lg.grad_weights.reshaped()(i)));
    }
    for (Eigen::Index i = 0; i < k; ++i) {
      Eigen::VectorXd bp = m.bias, bm = m.bias;
      bp(i) += eps;
      bm(i) -= eps;
      const double fd = (oracle::softmax_objective(m.weights, bp, x, y, lambda) -
                         oracle::softmax_objective(m.weights, bm, x, y, lambda)) / (2 * eps);
      worst = std::max(worst, rel(fd, lg.grad_bias(i)));
    }
    EXPECT_LT(worst, 1e-4) << "instance " << t;
  }
}

TEST(SoftmaxTest, DuplicatedRowsLeaveLossUnchanged) {
  Rng rng(2);
  auto m = SoftmaxModel::zeros({"a", "b"}, 3);
  m.weights.setRandom();
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 3);
  Eigen::MatrixXd xx(8, 3);
  xx << x, x;
  const std::vector<Eigen::Index> y{0, 1, 1, 0};
  const std::vector<Eigen::Index> yy{0, 1, 1, 0, 0, 1, 1, 0};
  EXPECT_NEAR(loss_and_grad(m, x, y, 0.1).loss, loss_and_grad(m, xx, yy, 0.1).loss, 1e-12);
}

TEST(SoftmaxTest, SeparableToyTrainsToFullAccuracy) {
  const auto data = toy_set();
  const auto r = train(data, {});
  const auto rep = evaluate_classifier(r.model, data);
  EXPECT_DOUBLE_EQ(rep.accuracy, 1.0);
  for (std::size_t i = 1; i < r.loss_history.size(); ++i)
    EXPECT_LE(r.loss_history[i], r.loss_history[i - 1] + 1e-12);
  const auto p = predict(r.model, Eigen::VectorXd::Constant(1, -5.0));
  EXPECT_EQ(p.label, "A");
  EXPECT_GT(p.probabilities(0), 0.99);
}

TEST(SoftmaxTest, HugeRegularizationGivesUniform) {
  TrainConfig cfg;
  cfg.l2_lambda = 1e6;
  const auto r = train(toy_set(), cfg);
  EXPECT_LT(r.model.weights.norm(), 1e-5);
  const auto p = predict(r.model, Eigen::VectorXd::Constant(1, 3.0));
  EXPECT_NEAR(p.probabilities(0), 0.5, 1e-4);
}

TEST(SoftmaxTest, ShiftInvarianceAndNormalization) {
  Rng rng(3);
  auto m = SoftmaxModel::zeros({"a", "b", "c", "d"}, 5);
  m.weights.setRandom();
  m.bias.setRandom();
  auto shifted = m;
  shifted.bias.array() += 123.0;
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd x(5);
    for (auto& v : x) v = rng.normal(0, 50);
    const auto p = predict(m, x);
    const auto q = predict(shifted, x);
    EXPECT_NEAR(p.probabilities.sum(), 1.0, 1e-9);
    EXPECT_GE(p.probabilities.minCoeff(), 0.0);
    EXPECT_EQ(p.index, q.index);
    EXPECT_LT((p.probabilities - q.probabilities).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(SoftmaxTest, RejectionThreshold) {
  const auto m = SoftmaxModel::zeros({"a", "b"}, 1);
  const auto p = predict(m, Eigen::VectorXd::Zero(1), 0.6);
  EXPECT_FALSE(p.label.has_value());
}

TEST(SoftmaxTest, Errors) {
  const auto m = SoftmaxModel::zeros({"a", "b"}, 2);
  EXPECT_THROW(predict(m, Eigen::VectorXd::Zero(3)), DomainError);
  EXPECT_THROW(encode_labels(m, {"zzz"}), DataError);
  EXPECT_THROW(SoftmaxModel::zeros({"a", "a"}, 2).validate(), DataError);
  EXPECT_THROW(SoftmaxModel::zeros({"a"}, 2).validate(), DataError);
  FeatureSet empty;
  EXPECT_THROW(train(empty, {}), DataError);
}

TEST(SoftmaxTest, JsonAndCsvRoundTrip) {
  const auto data = toy_set();
  const auto r = train(data, {});
  const auto back = softmax_model_from_json(nlohmann::json::parse(to_json(r.model).dump()));
  EXPECT_EQ(back.classes, r.model.classes);
  EXPECT_TRUE(back.weights.isApprox(r.model.weights, 1e-15));
  EXPECT_TRUE(back.bias.isApprox(r.model.bias, 1e-15));

  const auto dir = std::filesystem::temp_directory_path() / "vsa_softmax_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "f.csv") << "id,label,v1,v2\nx,cat,1,2\ny,dog,3,4\n";
  const auto f = load_feature_csv(dir / "f.csv");
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f.labels[1], "dog");
  EXPECT_EQ(f.features(1, 1), 4.0);
  std::ofstream(dir / "g.csv") << "x,cat,1,2\ny,dog,3\n";
  EXPECT_THROW(load_feature_csv(dir / "g.csv"), DataError);
}

}  // namespace
}  // namespace vsa
