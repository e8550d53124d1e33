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

#include "testing.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/QR>

namespace ptot::testing {
namespace {

double Sq(const Point3& p, const Point3& q) {
  const double dx = p.x() - q.x();
  const double dy = p.y() - q.y();
  const double dz = p.z() - q.z();
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace

PointCloud RandomCloud(Rng& rng, size_t n, double lo, double hi) {
  std::vector<Point3> points(n);
  for (auto& p : points) {
    p = Point3(rng.Uniform(lo, hi), rng.Uniform(lo, hi), rng.Uniform(lo, hi));
  }
  return PointCloud(std::move(points));
}

Eigen::Matrix3d RandomRotation(Rng& rng) {
  Eigen::Matrix3d g;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) g(i, j) = rng.Normal();
  }
  const Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
  Eigen::Matrix3d q = qr.householderQ();
  const Eigen::Matrix3d r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < 3; ++k) {
    if (r(k, k) < 0.0) q.col(k) = -q.col(k);
  }
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

double RelativeError(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

double BruteChamfer(const PointCloud& a, const PointCloud& b) {
  auto directed = [](const PointCloud& x, const PointCloud& y) {
    double sum = 0.0;
    for (const Point3& p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point3& q : y) best = std::min(best, Sq(p, q));
      sum += best;
    }
    return sum / static_cast<double>(x.size());
  };
  return directed(a, b) + directed(b, a);
}

double PermutationOt(const PointCloud& a, const PointCloud& b) {
  std::vector<size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) sum += Sq(a[i], b[perm[i]]);
    best = std::min(best, sum);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(a.size());
}

std::pair<size_t, double> BruteNearest(const std::vector<Point3>& cloud,
                                       const Point3& q) {
  size_t id = 0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < cloud.size(); ++i) {
    const double d2 = Sq(cloud[i], q);
    if (d2 < best) {
      best = d2;
      id = i;
    }
  }
  return {id, best};
}

double NearestGap(const std::vector<Point3>& cloud, const Point3& q) {
  double first = std::numeric_limits<double>::infinity();
  double second = first;
  for (const Point3& p : cloud) {
    const double d2 = Sq(p, q);
    if (d2 < first) {
      second = first;
      first = d2;
    } else if (d2 < second) {
      second = d2;
    }
  }
  return second - first;
}

double CentralDifference(const std::function<double(double)>& f, double x,
                         double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double MaxGradientError(
    const std::function<double(const PointCloud&, const PointCloud&)>& value,
    const PointCloud& a, const PointCloud& b, const PointGradients& grad_a,
    const PointGradients& grad_b, double h) {
  double worst = 0.0;
  for (int side = 0; side < 2; ++side) {
    const PointCloud& moving = side == 0 ? a : b;
    const PointGradients& grad = side == 0 ? grad_a : grad_b;
    for (size_t i = 0; i < moving.size(); ++i) {
      for (int k = 0; k < 3; ++k) {
        auto f = [&](double x) {
          std::vector<Point3> points = moving.points();
          points[i][k] = x;
          const PointCloud moved(std::move(points));
          return side == 0 ? value(moved, b) : value(a, moved);
        };
        const double fd = CentralDifference(f, moving[i][k], h);
        worst = std::max(worst, RelativeError(grad[i][k], fd));
      }
    }
  }
  return worst;
}

std::pair<PointCloud, PointCloud> TieFreePair(Rng& rng, size_t n, size_t m,
                                              double min_gap) {
  while (true) {
    PointCloud a = RandomCloud(rng, n);
    PointCloud b = RandomCloud(rng, m);
    bool ok = true;
    for (const Point3& p : a) ok = ok && NearestGap(b.points(), p) > min_gap;
    for (const Point3& p : b) ok = ok && NearestGap(a.points(), p) > min_gap;
    if (ok) return {std::move(a), std::move(b)};
  }
}

double BruteCompleteness(const PointCloud& pred, const PointCloud& gt,
                         double radius) {
  size_t covered = 0;
  for (const Point3& g : gt) {
    covered += BruteNearest(pred.points(), g).second <= radius * radius;
  }
  return 100.0 * static_cast<double>(covered) / static_cast<double>(gt.size());
}

double BrutePercentile(std::vector<double> values, double r) {
  std::sort(values.begin(), values.end());
  // Smallest rank k with k / n >= r / 100.
  const double n = static_cast<double>(values.size());
  size_t k = 1;
  while (k < values.size() && static_cast<double>(k) * 100.0 < r * n) ++k;
  return values[k - 1];
}

double BruteAccuracy(const PointCloud& pred, const PointCloud& gt, double r) {
  std::vector<double> d;
  for (const Point3& p : pred) {
    d.push_back(std::sqrt(BruteNearest(gt.points(), p).second));
  }
  return BrutePercentile(std::move(d), r);
}

double BruteRelativeAccuracy(const PointCloud& pred, const PointCloud& gt,
                             double r) {
  std::vector<double> d;
  for (const Point3& p : pred) {
    const auto [id, d2] = BruteNearest(gt.points(), p);
    d.push_back(std::sqrt(d2) / gt[id].norm());
  }
  return BrutePercentile(std::move(d), r);
}

PointCloud Shuffled(const PointCloud& cloud, Rng& rng) {
  std::vector<Point3> points = cloud.points();
  for (size_t i = points.size(); i > 1; --i) {
    std::swap(points[i - 1], points[rng.UniformIndex(i)]);
  }
  return PointCloud(std::move(points));
}

std::filesystem::path ScratchDir(const std::string& name) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / ("ptot_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

}  // namespace ptot::testing
