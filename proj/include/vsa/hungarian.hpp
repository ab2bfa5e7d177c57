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
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace vsa {

using Assignment = std::vector<std::pair<int, int>>;

namespace detail {

// Shortest augmenting path with row/column potentials, rows <= cols.
// Returns the column assigned to each row. Ties resolve to the first
// (lowest-index) column encountered, so output is deterministic.
template <typename Derived>
std::vector<int> solve_wide(const Eigen::MatrixBase<Derived>& cost) {
  using Scalar = typename Derived::Scalar;
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());
  const Scalar inf = std::numeric_limits<Scalar>::infinity();

  // 1-based; index 0 is the virtual source column.
  std::vector<Scalar> u(rows + 1, Scalar(0)), v(cols + 1, Scalar(0));
  std::vector<int> owner(cols + 1, 0), way(cols + 1, 0);
  std::vector<Scalar> min_slack(cols + 1);
  std::vector<char> used(cols + 1);

  for (int r = 1; r <= rows; ++r) {
    owner[0] = r;
    int col = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col] = 1;
      const int row = owner[col];
      Scalar delta = inf;
      int next = 0;
      for (int c = 1; c <= cols; ++c) {
        if (used[c]) continue;
        const Scalar slack = cost(row - 1, c - 1) - u[row] - v[c];
        if (slack < min_slack[c]) {
          min_slack[c] = slack;
          way[c] = col;
        }
        if (min_slack[c] < delta) {
          delta = min_slack[c];
          next = c;
        }
      }
      for (int c = 0; c <= cols; ++c) {
        if (used[c]) {
          u[owner[c]] += delta;
          v[c] -= delta;
        } else {
          min_slack[c] -= delta;
        }
      }
      col = next;
    } while (owner[col] != 0);
    do {
      const int prev = way[col];
      owner[col] = owner[prev];
      col = prev;
    } while (col != 0);
  }

  std::vector<int> row_to_col(rows, -1);
  for (int c = 1; c <= cols; ++c)
    if (owner[c] != 0) row_to_col[owner[c] - 1] = c - 1;
  return row_to_col;
}

}  // namespace detail

/// Minimum-cost assignment of size min(rows, cols). Returns (row, col) pairs
/// sorted by row. Costs must be finite.
template <typename Derived>
Assignment hungarian_assign(const Eigen::MatrixBase<Derived>& cost) {
  Assignment out;
  if (cost.rows() == 0 || cost.cols() == 0) return out;
  if (cost.rows() <= cost.cols()) {
    const auto row_to_col = detail::solve_wide(cost);
    for (int r = 0; r < static_cast<int>(row_to_col.size()); ++r)
      if (row_to_col[r] >= 0) out.emplace_back(r, row_to_col[r]);
  } else {
    const auto col_to_row = detail::solve_wide(cost.transpose());
    for (int c = 0; c < static_cast<int>(col_to_row.size()); ++c)
      if (col_to_row[c] >= 0) out.emplace_back(col_to_row[c], c);
    std::sort(out.begin(), out.end());
  }
  return out;
}

template <typename Derived>
typename Derived::Scalar assignment_cost(const Eigen::MatrixBase<Derived>& cost,
                                         const Assignment& assignment) {
  typename Derived::Scalar total(0);
  for (const auto& [r, c] : assignment) total += cost(r, c);
  return total;
}

}  // namespace vsa
