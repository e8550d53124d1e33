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

#include <Eigen/Core>

#include "ptot/distances.h"

namespace ptot {

// Largest cardinality ExactOt accepts. The O(N^3) solver is a test oracle.
inline constexpr size_t kExactOtMaxPoints = 64;

// Minimum-cost perfect matching on a square cost matrix (Hungarian method
// with potentials). Returns row -> column assignment; writes the total cost.
std::vector<int> SolveAssignment(const Eigen::MatrixXd& cost, double* total_cost);

// Exact OT between equal-cardinality uniform clouds:
// (1/N) min over permutations s of sum_i |a_i - b_s(i)|^2. The plan holds
// mass 1/N on each matched pair, so its marginals are exactly uniform.
DistanceResult ExactOt(const PointCloud& a, const PointCloud& b);

}  // namespace ptot
