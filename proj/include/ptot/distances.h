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

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ptot/point_cloud.h"

namespace ptot {

// Coupling between two uniform point sets of equal cardinality N. Entries
// are masses; a feasible plan has every row and column summing to 1/N.
class TransportPlan {
 public:
  explicit TransportPlan(Eigen::MatrixXd coupling);

  const Eigen::MatrixXd& coupling() const { return coupling_; }
  size_t size() const { return static_cast<size_t>(coupling_.rows()); }

  // max over rows and columns of |sum - 1/N|.
  double MaxMarginalViolation() const;

 private:
  Eigen::MatrixXd coupling_;
};

struct DistanceResult {
  // Loss value in m^2. For Sinkhorn this is the entropic OT objective (or
  // the debiased divergence); see sinkhorn.h.
  double value = 0.0;
  std::optional<PointGradients> gradient_a;
  std::optional<PointGradients> gradient_b;
  std::optional<TransportPlan> plan;
  // Optimal assignment (exact OT only): a_i is matched to b_assignment[i].
  std::optional<std::vector<int>> assignment;

  // Sinkhorn diagnostics. iterations_used == max_iters with
  // marginal_violation >= tolerance means the solver did not converge.
  int iterations_used = 0;
  double marginal_violation = 0.0;
  bool converged = true;
  // <plan, C> of the A-B plan (Sinkhorn only), without the entropic term.
  double transport_cost = 0.0;
  // Regularization actually used (Sinkhorn only).
  double epsilon = 0.0;
};

// C[i][j] = |a_i - b_j|^2.
Eigen::MatrixXd CostMatrix(const PointCloud& a, const PointCloud& b);

// Symmetric chamfer distance: mean over A of the squared distance to the
// nearest point of B, plus the same from B to A. Nearest neighbors come from
// a k-d tree.
DistanceResult Chamfer(const PointCloud& a, const PointCloud& b);

// Chamfer value plus its gradient with respect to every coordinate of both
// clouds. Nearest-neighbor matches are held fixed (ties resolved to the
// smallest id), which gives a subgradient at ties.
DistanceResult ChamferGradient(const PointCloud& a, const PointCloud& b);

}  // namespace ptot
