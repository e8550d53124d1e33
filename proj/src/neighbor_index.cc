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

#include "ptot/neighbor_index.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ptot {
namespace {

constexpr size_t kLeafSize = 8;

inline void Consider(size_t id, double d2, Neighbor* best) {
  if (d2 < best->squared_distance ||
      (d2 == best->squared_distance && id < best->id)) {
    best->id = id;
    best->squared_distance = d2;
  }
}

}  // namespace

NeighborIndex::NeighborIndex(const PointCloud& cloud)
    : points_(cloud.points()), order_(cloud.size()) {
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(2 * (points_.size() / kLeafSize + 1));
  Build(0, points_.size());
}

int NeighborIndex::Build(size_t begin, size_t end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kLeafSize) return id;

  Point3 lo = points_[order_[begin]], hi = lo;
  for (size_t i = begin + 1; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int axis;
  (hi - lo).maxCoeff(&axis);
  if (hi[axis] == lo[axis]) return id;  // all points coincide

  const size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end, [&](size_t a, size_t b) {
                     return points_[a][axis] < points_[b][axis];
                   });
  // Left holds coordinates <= split, right holds coordinates >= split.
  const double split = points_[order_[mid]][axis];
  const int left = Build(begin, mid);
  const int right = Build(mid, end);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void NeighborIndex::Search(int node_id, const Point3& query,
                           Neighbor* best) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    for (size_t i = node.begin; i < node.end; ++i) {
      const size_t id = order_[i];
      Consider(id, SquaredDistance(points_[id], query), best);
    }
    return;
  }
  const double diff = query[node.axis] - node.split;
  const int near = diff <= 0.0 ? node.left : node.right;
  const int far = diff <= 0.0 ? node.right : node.left;
  Search(near, query, best);
  // Equality still descends so that a tied point with a smaller id on the
  // far side is found.
  if (diff * diff <= best->squared_distance) Search(far, query, best);
}

Neighbor NeighborIndex::Nearest(const Point3& query) const {
  Neighbor best{std::numeric_limits<size_t>::max(),
                std::numeric_limits<double>::infinity()};
  Search(0, query, &best);
  return best;
}

bool NeighborIndex::CoveredWithin(const Point3& query, double radius) const {
  Require(std::isfinite(radius) && radius > 0.0, "radius must be positive");
  return Nearest(query).squared_distance <= radius * radius;
}

Neighbor NearestBruteForce(const PointCloud& cloud, const Point3& query) {
  Neighbor best{std::numeric_limits<size_t>::max(),
                std::numeric_limits<double>::infinity()};
  for (size_t i = 0; i < cloud.size(); ++i) {
    Consider(i, SquaredDistance(cloud[i], query), &best);
  }
  return best;
}

}  // namespace ptot
