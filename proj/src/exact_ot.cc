// Copyright 2026 The ptot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ptot/exact_ot.h"

#include <limits>
#include <string>

namespace ptot {

std::vector<int> SolveAssignment(const Eigen::MatrixXd& cost,
                                 double* total_cost) {
  Require(cost.rows() > 0 && cost.rows() == cost.cols(),
          "assignment needs a non-empty square cost matrix");
  Require(cost.allFinite(), "assignment costs must be finite");
  const int n = static_cast<int>(cost.rows());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is a virtual start column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> row_of(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    row_of[0] = i;
    int j0 = 0;
    std::vector<double> min_slack(n + 1, kInf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = row_of[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double slack = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      const int j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j) assignment[row_of[j] - 1] = j - 1;
  if (total_cost != nullptr) {
    // Summed from the matrix rather than the potentials to avoid drift.
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += cost(i, assignment[i]);
    *total_cost = total;
  }
  return assignment;
}

DistanceResult ExactOt(const PointCloud& a, const PointCloud& b) {
  Require(a.size() == b.size(),
          "exact OT requires equal cardinalities, got " +
              std::to_string(a.size()) + " and " + std::to_string(b.size()));
  Require(a.size() <= kExactOtMaxPoints,
          "exact OT is limited to " + std::to_string(kExactOtMaxPoints) +
              " points, got " + std::to_string(a.size()));
  const Eigen::MatrixXd cost = CostMatrix(a, b);
  double total = 0.0;
  std::vector<int> assignment = SolveAssignment(cost, &total);
  const double n = static_cast<double>(a.size());
  Eigen::MatrixXd plan = Eigen::MatrixXd::Zero(a.size(), a.size());
  for (size_t i = 0; i < a.size(); ++i) plan(i, assignment[i]) = 1.0 / n;

  DistanceResult result;
  result.value = total / n;
  result.transport_cost = result.value;
  result.plan = TransportPlan(std::move(plan));
  result.assignment = std::move(assignment);
  return result;
}

}  // namespace ptot
