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

#include "ptot/distances.h"

#include <algorithm>
#include <cmath>

#include "ptot/neighbor_index.h"

namespace ptot {

TransportPlan::TransportPlan(Eigen::MatrixXd coupling)
    : coupling_(std::move(coupling)) {
  Require(coupling_.rows() > 0 && coupling_.rows() == coupling_.cols(),
          "transport plan must be a non-empty square matrix");
  Require(coupling_.allFinite() && coupling_.minCoeff() >= 0.0,
          "transport plan entries must be finite and non-negative");
}

double TransportPlan::MaxMarginalViolation() const {
  const double target = 1.0 / static_cast<double>(coupling_.rows());
  const double rows = (coupling_.rowwise().sum().array() - target).abs().maxCoeff();
  const double cols = (coupling_.colwise().sum().array() - target).abs().maxCoeff();
  return std::max(rows, cols);
}

Eigen::MatrixXd CostMatrix(const PointCloud& a, const PointCloud& b) {
  Eigen::MatrixXd cost(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) {
      cost(i, j) = SquaredDistance(a[i], b[j]);
    }
  }
  return cost;
}

namespace {

// For every point of `from`, its nearest neighbor in `to`.
std::vector<Neighbor> MatchAll(const PointCloud& from, const PointCloud& to) {
  const NeighborIndex index(to);
  std::vector<Neighbor> matches(from.size());
  for (size_t i = 0; i < from.size(); ++i) matches[i] = index.Nearest(from[i]);
  return matches;
}

double MeanSquared(const std::vector<Neighbor>& matches) {
  double sum = 0.0;
  for (const Neighbor& m : matches) sum += m.squared_distance;
  return sum / static_cast<double>(matches.size());
}

}  // namespace

DistanceResult Chamfer(const PointCloud& a, const PointCloud& b) {
  DistanceResult result;
  result.value = MeanSquared(MatchAll(a, b)) + MeanSquared(MatchAll(b, a));
  return result;
}

DistanceResult ChamferGradient(const PointCloud& a, const PointCloud& b) {
  const std::vector<Neighbor> ab = MatchAll(a, b);
  const std::vector<Neighbor> ba = MatchAll(b, a);
  DistanceResult result;
  result.value = MeanSquared(ab) + MeanSquared(ba);

  const double wa = 2.0 / static_cast<double>(a.size());
  const double wb = 2.0 / static_cast<double>(b.size());
  PointGradients ga(a.size(), Point3::Zero());
  PointGradients gb(b.size(), Point3::Zero());
  for (size_t i = 0; i < a.size(); ++i) {
    const Point3 diff = a[i] - b[ab[i].id];
    ga[i] += wa * diff;
    gb[ab[i].id] -= wa * diff;
  }
  for (size_t j = 0; j < b.size(); ++j) {
    const Point3 diff = b[j] - a[ba[j].id];
    gb[j] += wb * diff;
    ga[ba[j].id] -= wb * diff;
  }
  result.gradient_a = std::move(ga);
  result.gradient_b = std::move(gb);
  return result;
}

}  // namespace ptot
