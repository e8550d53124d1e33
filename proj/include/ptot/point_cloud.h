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
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ptot/common.h"

namespace ptot {

// Non-empty set of finite 3D points, in meters. Storage order carries no
// meaning; every operation in the toolkit is invariant to it.
class PointCloud {
 public:
  // Throws PreconditionError if `points` is empty or holds a non-finite
  // coordinate.
  explicit PointCloud(std::vector<Point3> points);

  size_t size() const { return points_.size(); }
  const Point3& operator[](size_t i) const { return points_[i]; }
  const std::vector<Point3>& points() const { return points_; }
  std::span<const Point3> span() const { return points_; }

  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  bool operator==(const PointCloud& other) const = default;

 private:
  std::vector<Point3> points_;
};

// Draws n distinct points uniformly without replacement (partial
// Fisher-Yates), deterministic in `seed`. Requires 1 <= n <= |cloud|.
PointCloud Subsample(const PointCloud& cloud, size_t n, uint64_t seed);

// Maps every point p to rotation * p + translation. The rotation must be
// orthonormal with determinant +1 to within 1e-9.
PointCloud ApplyRigid(const PointCloud& cloud, const Eigen::Matrix3d& rotation,
                      const Point3& translation);

// True if `m` is a proper rotation to within `tolerance` (entrywise on
// m^T m - I and on det(m) - 1).
bool IsRotation(const Eigen::Matrix3d& m, double tolerance = 1e-9);

// Multiset equality: same points with the same multiplicities, any order.
bool SameMultiset(const PointCloud& a, const PointCloud& b);

}  // namespace ptot
