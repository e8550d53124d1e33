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

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ptot/common.h"
#include "ptot/point_cloud.h"
#include "ptot/rng.h"

// Independent reference implementations shared by the unit and acceptance
// suites. Nothing here calls the code under test.
namespace ptot::testing {

PointCloud RandomCloud(Rng& rng, size_t n, double lo = 0.0, double hi = 1.0);

// Haar-random rotation from the QR decomposition of a Gaussian matrix, with
// the sign fix that makes R unique and det(R) = +1.
Eigen::Matrix3d RandomRotation(Rng& rng);

// |a - b| / max(|a|, |b|, floor).
double RelativeError(double a, double b, double floor = 1e-6);

// Chamfer by double loop.
double BruteChamfer(const PointCloud& a, const PointCloud& b);

// (1/N) min over all N! permutations of sum |a_i - b_s(i)|^2.
double PermutationOt(const PointCloud& a, const PointCloud& b);

// Index and squared distance of the nearest point, smallest index on ties.
std::pair<size_t, double> BruteNearest(const std::vector<Point3>& cloud,
                                       const Point3& q);

// Gap between the smallest and second smallest squared distance from q to
// the cloud; +inf for a one-point cloud.
double NearestGap(const std::vector<Point3>& cloud, const Point3& q);

// Central difference (f(x+h) - f(x-h)) / 2h along one coordinate.
double CentralDifference(const std::function<double(double)>& f, double x,
                         double h);

// Largest RelativeError between analytic coordinate gradients of
// value(a, b) and central differences with step h, over every coordinate of
// both clouds.
double MaxGradientError(
    const std::function<double(const PointCloud&, const PointCloud&)>& value,
    const PointCloud& a, const PointCloud& b, const PointGradients& grad_a,
    const PointGradients& grad_b, double h = 1e-5);

// Random clouds where every point's nearest neighbor in the other cloud
// beats the runner-up by more than `min_gap` in squared distance, so small
// perturbations never switch a match.
std::pair<PointCloud, PointCloud> TieFreePair(Rng& rng, size_t n, size_t m,
                                              double min_gap = 1e-4);

// Metrics by double loop and full sort. Completeness uses the closed ball,
// percentiles use nearest rank with ties toward the smaller gt index.
double BruteCompleteness(const PointCloud& pred, const PointCloud& gt,
                         double radius);
double BrutePercentile(std::vector<double> values, double r);
double BruteAccuracy(const PointCloud& pred, const PointCloud& gt, double r);
double BruteRelativeAccuracy(const PointCloud& pred, const PointCloud& gt,
                             double r);

PointCloud Shuffled(const PointCloud& cloud, Rng& rng);

// Fresh empty directory under the system temp dir.
std::filesystem::path ScratchDir(const std::string& name);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& text);

}  // namespace ptot::testing
