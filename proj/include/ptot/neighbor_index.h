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

#include <cstddef>
#include <vector>

#include "ptot/point_cloud.h"

namespace ptot {

struct Neighbor {
  size_t id = 0;
  double squared_distance = 0.0;

  bool operator==(const Neighbor& other) const = default;
};

// Exact nearest-neighbor search over a fixed cloud (static k-d tree).
//
// Results are bit-identical to NearestBruteForce: both use SquaredDistance
// and break ties toward the smallest original point id. The index is
// immutable after construction and may be queried concurrently.
class NeighborIndex {
 public:
  explicit NeighborIndex(const PointCloud& cloud);

  size_t size() const { return points_.size(); }

  Neighbor Nearest(const Point3& query) const;

  // Closed ball: true iff Nearest(query).squared_distance <= radius^2.
  // Requires radius > 0.
  bool CoveredWithin(const Point3& query, double radius) const;

 private:
  struct Node {
    // Leaves own [begin, end) of order_; inner nodes split on `axis`.
    size_t begin = 0;
    size_t end = 0;
    int axis = -1;
    double split = 0.0;
    int left = -1;
    int right = -1;
  };

  int Build(size_t begin, size_t end);
  void Search(int node, const Point3& query, Neighbor* best) const;

  std::vector<Point3> points_;
  std::vector<size_t> order_;
  std::vector<Node> nodes_;
};

// Linear scan with the same tie rule as NeighborIndex::Nearest.
Neighbor NearestBruteForce(const PointCloud& cloud, const Point3& query);

}  // namespace ptot
