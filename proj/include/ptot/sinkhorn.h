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

#include <Eigen/Core>

#include "ptot/distances.h"

namespace ptot {

struct SinkhornConfig {
  // Entropic regularization in m^2. When unset, the solver uses
  // epsilon_scale * mean(C(A, B)) and treats it as a constant (no gradient
  // flows through the scale).
  std::optional<double> epsilon;
  double epsilon_scale = 0.05;
  int max_iters = 500;
  // Stop once every row and column of the plan is within this much mass of
  // 1/N.
  double tolerance = 1e-6;
  // Sinkhorn divergence OT(A,B) - OT(A,A)/2 - OT(B,B)/2 with a shared
  // epsilon.
  bool debiased = true;

  void Validate() const;
  double ResolveEpsilon(const Eigen::MatrixXd& cost_ab) const;
};

// Solution of min_P <P, C> + eps * KL(P | mu x nu) for uniform mu, nu.
struct EntropicSolution {
  Eigen::VectorXd f;  // dual potential on rows
  Eigen::VectorXd g;  // dual potential on columns
  // Dual objective <f, mu> + <g, nu>. At convergence this equals
  // <P, C> + eps * KL(P | mu x nu).
  double value = 0.0;
  Eigen::MatrixXd plan;
  double transport_cost = 0.0;
  int iterations = 0;
  double violation = 0.0;
  bool converged = false;
};

// Log-domain Sinkhorn on a square cost matrix with uniform marginals 1/N.
// Each iteration updates g then f by log-sum-exp; the returned pair has
// exact column marginals and row marginals within `tolerance` when
// converged. `warm_f` optionally seeds the row potential, e.g. from the
// solution at a larger epsilon.
EntropicSolution SolveEntropicOt(const Eigen::MatrixXd& cost, double epsilon,
                                 int max_iters, double tolerance,
                                 const Eigen::VectorXd* warm_f = nullptr);

// Same problem for a symmetric cost (a cloud against itself). Uses the
// averaged fixed point f <- (f + T(f)) / 2, so f = g and the plan is
// symmetric; marginals are checked as above.
EntropicSolution SolveSymmetricEntropicOt(const Eigen::MatrixXd& cost,
                                          double epsilon, int max_iters,
                                          double tolerance);

// Entropic OT between equal-cardinality clouds. `value` is the entropic
// objective (debiased when cfg.debiased); `transport_cost` is <plan, C> of
// the A-B plan. Non-convergence is reported, not thrown.
DistanceResult Sinkhorn(const PointCloud& a, const PointCloud& b,
                        const SinkhornConfig& cfg = {});

// Sinkhorn plus coordinate gradients. With the plans P held fixed,
// d/da_i = sum_j 2 P_ij (a_i - b_j), minus half the gradient of the
// self-transport terms when debiased.
DistanceResult SinkhornGradient(const PointCloud& a, const PointCloud& b,
                                const SinkhornConfig& cfg = {});

}  // namespace ptot
