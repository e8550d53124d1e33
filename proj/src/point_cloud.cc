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

#include "ptot/point_cloud.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/LU>

#include "ptot/rng.h"

namespace ptot {

PointCloud::PointCloud(std::vector<Point3> points) : points_(std::move(points)) {
  Require(!points_.empty(), "point cloud must hold at least one point");
  for (size_t i = 0; i < points_.size(); ++i) {
    Require(points_[i].allFinite(),
            "point " + std::to_string(i) + " has a non-finite coordinate");
  }
}

PointCloud Subsample(const PointCloud& cloud, size_t n, uint64_t seed) {
  Require(n >= 1, "subsample count must be at least 1");
  Require(n <= cloud.size(),
          "subsample count " + std::to_string(n) + " exceeds cloud size " +
              std::to_string(cloud.size()));
  std::vector<size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (size_t i = 0; i < n; ++i) {
    const size_t j = i + rng.UniformIndex(order.size() - i);
    std::swap(order[i], order[j]);
  }
  std::vector<Point3> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(cloud[order[i]]);
  return PointCloud(std::move(out));
}

bool IsRotation(const Eigen::Matrix3d& m, double tolerance) {
  if (!m.allFinite()) return false;
  const Eigen::Matrix3d gram = m.transpose() * m - Eigen::Matrix3d::Identity();
  if (gram.cwiseAbs().maxCoeff() > tolerance) return false;
  return std::abs(m.determinant() - 1.0) <= tolerance;
}

PointCloud ApplyRigid(const PointCloud& cloud, const Eigen::Matrix3d& rotation,
                      const Point3& translation) {
  Require(IsRotation(rotation), "rotation is not orthonormal with det +1");
  Require(translation.allFinite(), "translation must be finite");
  std::vector<Point3> out;
  out.reserve(cloud.size());
  for (const Point3& p : cloud) out.push_back(rotation * p + translation);
  return PointCloud(std::move(out));
}

bool SameMultiset(const PointCloud& a, const PointCloud& b) {
  if (a.size() != b.size()) return false;
  auto less = [](const Point3& p, const Point3& q) {
    return std::lexicographical_compare(p.data(), p.data() + 3, q.data(),
                                        q.data() + 3);
  };
  std::vector<Point3> sa = a.points(), sb = b.points();
  std::sort(sa.begin(), sa.end(), less);
  std::sort(sb.begin(), sb.end(), less);
  return sa == sb;
}

}  // namespace ptot
