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

#include <vector>

#include "ptot/distances.h"
#include "ptot/sinkhorn.h"

namespace ptot::testing {

struct SweepStep {
  double epsilon = 0.0;
  EntropicSolution solution;
};

// Non-debiased entropic OT over a geometric schedule eps_k = eps_max *
// factor^k down to eps_min, each solve warm-started from the previous row
// potential.
inline std::vector<SweepStep> EpsilonSweep(const Eigen::MatrixXd& cost,
                                           double eps_max, double eps_min,
                                           double factor, int max_iters,
                                           double tolerance) {
  std::vector<SweepStep> steps;
  double eps = eps_max;
  while (true) {
    const Eigen::VectorXd* warm =
        steps.empty() ? nullptr : &steps.back().solution.f;
    EntropicSolution s = SolveEntropicOt(cost, eps, max_iters, tolerance, warm);
    steps.push_back({eps, std::move(s)});
    if (eps <= eps_min) break;
    eps = std::max(eps * factor, eps_min);
  }
  return steps;
}

// Sweep used by the oracle-agreement checks: mean cost down to 1e-3 of it,
// halving each step.
inline std::vector<SweepStep> DefaultSweep(const Eigen::MatrixXd& cost) {
  const double scale = cost.mean() > 0.0 ? cost.mean() : 1.0;
  return EpsilonSweep(cost, scale, 1e-3 * scale, 0.5, 200000, 1e-6);
}

}  // namespace ptot::testing
