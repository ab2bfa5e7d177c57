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

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "vsa/error.hpp"
#include "vsa/geometry.hpp"

namespace vsa {

/// Box measurement [u, v, s, r]: center x, center y, area, aspect ratio w/h.
template <typename Scalar>
using BoxMeasurement = Eigen::Matrix<Scalar, 4, 1>;

template <typename Scalar>
BoxMeasurement<Scalar> to_measurement(const Box<Scalar>& b) {
  const Scalar w = b.width();
  const Scalar h = b.height();
  if (!(w > Scalar(0) && h > Scalar(0))) throw DomainError("box must have positive area");
  return {b.x_min + w / Scalar(2), b.y_min + h / Scalar(2), w * h, w / h};
}

template <typename Scalar>
Box<Scalar> to_box(const BoxMeasurement<Scalar>& z) {
  const Scalar w = std::sqrt(z(2) * z(3));
  const Scalar h = z(2) / w;
  return {z(0) - w / Scalar(2), z(1) - h / Scalar(2), z(0) + w / Scalar(2), z(1) + h / Scalar(2)};
}

template <typename Scalar>
struct KalmanNoise {
  Eigen::Matrix<Scalar, 7, 1> process =
      (Eigen::Matrix<Scalar, 7, 1>() << 1e-2, 1e-2, 1e-2, 1e-4, 1e-2, 1e-2, 1e-4).finished();
  Eigen::Matrix<Scalar, 4, 1> measurement = (Eigen::Matrix<Scalar, 4, 1>() << 1, 1, 10, 10).finished();
  Eigen::Matrix<Scalar, 7, 1> initial =
      (Eigen::Matrix<Scalar, 7, 1>() << 10, 10, 10, 10, 1e3, 1e3, 1e3).finished();
};

/// Constant-velocity box filter over x = [u, v, s, r, du, dv, ds].
template <typename Scalar>
struct KalmanBoxState {
  using StateVector = Eigen::Matrix<Scalar, 7, 1>;
  using StateMatrix = Eigen::Matrix<Scalar, 7, 7>;

  StateVector mean = StateVector::Zero();
  StateMatrix covariance = StateMatrix::Identity();

  static constexpr Scalar kMinScale = Scalar(1e-6);

  static KalmanBoxState from_box(const Box<Scalar>& b, const KalmanNoise<Scalar>& noise = {}) {
    KalmanBoxState st;
    st.mean.template head<4>() = to_measurement(b);
    st.covariance = noise.initial.asDiagonal();
    return st;
  }

  Box<Scalar> box() const { return to_box<Scalar>(mean.template head<4>()); }

  static StateMatrix transition() {
    StateMatrix f = StateMatrix::Identity();
    f(0, 4) = f(1, 5) = f(2, 6) = Scalar(1);
    return f;
  }
};

/// x' = F x, P' = F P F^T + Q. Non-positive predicted area is floored and its
/// rate zeroed.
template <typename Scalar>
KalmanBoxState<Scalar> kalman_predict(const KalmanBoxState<Scalar>& st,
                                      const KalmanNoise<Scalar>& noise = {}) {
  using State = KalmanBoxState<Scalar>;
  const auto f = State::transition();
  State out;
  out.mean = f * st.mean;
  if (out.mean(2) <= Scalar(0)) {
    out.mean(2) = State::kMinScale;
    out.mean(6) = Scalar(0);
  }
  out.covariance = f * st.covariance * f.transpose();
  out.covariance.diagonal() += noise.process;
  return out;
}

/// Linear correction with z = [u, v, s, r]. Covariance is re-symmetrized.
template <typename Scalar>
KalmanBoxState<Scalar> kalman_update(const KalmanBoxState<Scalar>& st, const Box<Scalar>& measured,
                                     const KalmanNoise<Scalar>& noise = {}) {
  using State = KalmanBoxState<Scalar>;
  const BoxMeasurement<Scalar> z = to_measurement(measured);

  // H = [I4 0], so H P H^T and P H^T are blocks of P.
  const Eigen::Matrix<Scalar, 4, 4> innovation_cov =
      st.covariance.template topLeftCorner<4, 4>() +
      Eigen::Matrix<Scalar, 4, 4>(noise.measurement.asDiagonal());
  const Eigen::Matrix<Scalar, 7, 4> pht = st.covariance.template leftCols<4>();

  Eigen::LDLT<Eigen::Matrix<Scalar, 4, 4>> ldlt(innovation_cov);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= Scalar(0))
    throw std::runtime_error("kalman_update: singular innovation covariance");
  const Eigen::Matrix<Scalar, 7, 4> gain = ldlt.solve(pht.transpose()).transpose();

  State out;
  out.mean = st.mean + gain * (z - st.mean.template head<4>());
  typename State::StateMatrix kh = State::StateMatrix::Zero();
  kh.template leftCols<4>() = gain;
  const typename State::StateMatrix p = (State::StateMatrix::Identity() - kh) * st.covariance;
  out.covariance = (p + p.transpose()) / Scalar(2);
  out.mean(2) = std::max(out.mean(2), State::kMinScale);
  out.mean(3) = std::max(out.mean(3), State::kMinScale);
  return out;
}

}  // namespace vsa
