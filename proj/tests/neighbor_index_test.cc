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

#include <cmath>

#include <gtest/gtest.h>

#include "ptot/rng.h"
#include "testing.h"

namespace ptot {
namespace {

void ExpectMatchesOracle(const PointCloud& cloud, const Point3& q) {
  const NeighborIndex index(cloud);
  const auto [id, d2] = testing::BruteNearest(cloud.points(), q);
  const Neighbor got = index.Nearest(q);
  EXPECT_EQ(got.id, id);
  EXPECT_EQ(got.squared_distance, d2);
}

TEST(NeighborIndex, SinglePoint) {
  const NeighborIndex index(PointCloud({Point3(1, 2, 3)}));
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const Point3 q(rng.Uniform(-9, 9), rng.Uniform(-9, 9), rng.Uniform(-9, 9));
    const Neighbor n = index.Nearest(q);
    EXPECT_EQ(n.id, 0u);
    EXPECT_EQ(n.squared_distance, SquaredDistance(q, Point3(1, 2, 3)));
  }
}

TEST(NeighborIndex, TwoPointExample) {
  const NeighborIndex index(PointCloud({Point3(0, 0, 0), Point3(10, 0, 0)}));
  EXPECT_EQ(index.Nearest(Point3(1, 0, 0)), (Neighbor{0, 1.0}));
  EXPECT_EQ(index.Nearest(Point3(10, 0, 0)), (Neighbor{1, 0.0}));
}

TEST(NeighborIndex, IndexedPointsHaveZeroDistance) {
  Rng rng(2);
  const PointCloud cloud = testing::RandomCloud(rng, 300);
  const NeighborIndex index(cloud);
  for (size_t i = 0; i < cloud.size(); ++i) {
    const Neighbor n = index.Nearest(cloud[i]);
    EXPECT_EQ(n.squared_distance, 0.0);
    EXPECT_EQ(n.id, i);
  }
}

TEST(NeighborIndex, MatchesBruteForceOnRandomClouds) {
  Rng rng(3);
  for (size_t n : {1u, 2u, 7u, 8u, 9u, 100u, 1000u, 2000u}) {
    const PointCloud cloud = testing::RandomCloud(rng, n, -5.0, 5.0);
    const NeighborIndex index(cloud);
    for (int k = 0; k < 500; ++k) {
      const Point3 q(rng.Uniform(-6, 6), rng.Uniform(-6, 6), rng.Uniform(-6, 6));
      const auto [id, d2] = testing::BruteNearest(cloud.points(), q);
      const Neighbor got = index.Nearest(q);
      ASSERT_EQ(got.id, id) << "n=" << n;
      ASSERT_EQ(got.squared_distance, d2);
      ASSERT_EQ(got, NearestBruteForce(cloud, q));
    }
  }
}

TEST(NeighborIndex, TiesGoToSmallestId) {
  // Lattice points with many exact ties and duplicates.
  std::vector<Point3> points;
  for (int rep = 0; rep < 3; ++rep) {
    for (int x = 0; x < 4; ++x) {
      for (int y = 0; y < 4; ++y) {
        for (int z = 0; z < 4; ++z) points.emplace_back(x, y, z);
      }
    }
  }
  Rng rng(4);
  const PointCloud shuffled = testing::Shuffled(PointCloud(points), rng);
  for (int x2 = -1; x2 <= 7; ++x2) {
    for (int y2 = -1; y2 <= 7; ++y2) {
      for (int z2 = -1; z2 <= 7; ++z2) {
        ExpectMatchesOracle(shuffled, Point3(0.5 * x2, 0.5 * y2, 0.5 * z2));
      }
    }
  }
}

TEST(NeighborIndex, BuildIsRepeatable) {
  Rng rng(5);
  const PointCloud cloud = testing::RandomCloud(rng, 500);
  const NeighborIndex a(cloud);
  const NeighborIndex b(cloud);
  for (int k = 0; k < 200; ++k) {
    const Point3 q(rng.Uniform(), rng.Uniform(), rng.Uniform());
    EXPECT_EQ(a.Nearest(q), b.Nearest(q));
  }
}

TEST(NeighborIndex, CoveredWithinIsClosedBall) {
  const NeighborIndex index(PointCloud({Point3(0, 0, 0)}));
  EXPECT_TRUE(index.CoveredWithin(Point3(0.5, 0, 0), 0.5));
  EXPECT_FALSE(index.CoveredWithin(Point3(std::nextafter(0.5, 1.0), 0, 0), 0.5));
  EXPECT_THROW(index.CoveredWithin(Point3(0, 0, 0), 0.0), PreconditionError);
  EXPECT_THROW(index.CoveredWithin(Point3(0, 0, 0), -1.0), PreconditionError);
}

TEST(NeighborIndex, CoveredWithinAgreesWithNearest) {
  Rng rng(6);
  const PointCloud cloud = testing::RandomCloud(rng, 400);
  const NeighborIndex index(cloud);
  for (int k = 0; k < 1000; ++k) {
    const Point3 q(rng.Uniform(), rng.Uniform(), rng.Uniform());
    const double r = rng.Uniform(0.001, 0.1);
    EXPECT_EQ(index.CoveredWithin(q, r),
              index.Nearest(q).squared_distance <= r * r);
  }
}

}  // namespace
}  // namespace ptot
