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

#include "ptot/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ptot/neighbor_index.h"

namespace ptot {
namespace {

void RequirePercentile(double r) {
  Require(std::isfinite(r) && r > 0.0 && r <= 100.0,
          "percentile must lie in (0, 100]");
}

std::string Full(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

double NearestRankPercentile(std::vector<double> values, double r_percentile) {
  RequirePercentile(r_percentile);
  Require(!values.empty(), "percentile of an empty set");
  const double n = static_cast<double>(values.size());
  size_t rank = static_cast<size_t>(std::ceil(r_percentile * n / 100.0));
  rank = std::clamp<size_t>(rank, 1, values.size());
  std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
  return values[rank - 1];
}

double Completeness(const PointCloud& pred, const PointCloud& gt,
                    double radius) {
  Require(std::isfinite(radius) && radius > 0.0, "radius must be positive");
  const NeighborIndex index(pred);
  size_t covered = 0;
  for (const Point3& g : gt) covered += index.CoveredWithin(g, radius);
  return 100.0 * static_cast<double>(covered) / static_cast<double>(gt.size());
}

double Accuracy(const PointCloud& pred, const PointCloud& gt,
                double r_percentile) {
  RequirePercentile(r_percentile);
  const NeighborIndex index(gt);
  std::vector<double> distances(pred.size());
  for (size_t i = 0; i < pred.size(); ++i) {
    distances[i] = std::sqrt(index.Nearest(pred[i]).squared_distance);
  }
  return NearestRankPercentile(std::move(distances), r_percentile);
}

double RelativeAccuracy(const PointCloud& pred, const PointCloud& gt,
                        double r_percentile) {
  RequirePercentile(r_percentile);
  const NeighborIndex index(gt);
  std::vector<double> ratios(pred.size());
  for (size_t i = 0; i < pred.size(); ++i) {
    const Neighbor nn = index.Nearest(pred[i]);
    const double norm = gt[nn.id].norm();
    if (norm == 0.0) {
      throw PreconditionError(
          "relative accuracy: predicted point " + std::to_string(i) +
          " is matched to ground-truth point " + std::to_string(nn.id) +
          " at the origin");
    }
    ratios[i] = std::sqrt(nn.squared_distance) / norm;
  }
  return NearestRankPercentile(std::move(ratios), r_percentile);
}

double MetricsReport::completeness(double radius) const {
  const auto it = completeness_at.find(radius);
  Require(it != completeness_at.end(), "radius not present in report");
  return it->second;
}

MetricsReport FullReport(const PointCloud& pred, const PointCloud& gt,
                         const std::vector<double>& radii,
                         double r_percentile) {
  Require(!radii.empty(), "at least one completeness radius is required");
  MetricsReport report;
  for (double r : radii) report.completeness_at[r] = Completeness(pred, gt, r);
  report.accuracy_m = Accuracy(pred, gt, r_percentile);
  report.relative_accuracy = RelativeAccuracy(pred, gt, r_percentile);
  report.percentile_r = r_percentile;
  report.n_pred = pred.size();
  report.n_gt = gt.size();
  return report;
}

std::string CompletenessKey(double radius) {
  return "completeness_" + std::to_string(std::lround(radius * 100.0)) + "cm";
}

std::string FormatReportTable(const MetricsReport& report) {
  std::ostringstream out;
  char line[96];
  // Largest radius first, as in the usual table layout.
  for (auto it = report.completeness_at.rbegin();
       it != report.completeness_at.rend(); ++it) {
    std::snprintf(line, sizeof(line), "%-22s %.2f\n",
                  CompletenessKey(it->first).c_str(), it->second);
    out << line;
  }
  std::snprintf(line, sizeof(line), "%-22s %.4f\n", "accuracy_m",
                report.accuracy_m);
  out << line;
  std::snprintf(line, sizeof(line), "%-22s %.4f\n", "relative_accuracy",
                report.relative_accuracy);
  out << line;
  std::snprintf(line, sizeof(line), "%-22s %g\n", "r_percentile",
                report.percentile_r);
  out << line;
  out << "n_pred                 " << report.n_pred << "\n";
  out << "n_gt                   " << report.n_gt << "\n";
  return out.str();
}

std::string FormatReportJson(const MetricsReport& report) {
  std::string json = "{";
  for (auto it = report.completeness_at.rbegin();
       it != report.completeness_at.rend(); ++it) {
    json += "\"" + CompletenessKey(it->first) + "\": " + Full(it->second) + ", ";
  }
  json += "\"accuracy_m\": " + Full(report.accuracy_m) + ", ";
  json += "\"relative_accuracy\": " + Full(report.relative_accuracy) + ", ";
  json += "\"r_percentile\": " + Full(report.percentile_r) + ", ";
  json += "\"n_pred\": " + std::to_string(report.n_pred) + ", ";
  json += "\"n_gt\": " + std::to_string(report.n_gt) + "}";
  return json;
}

}  // namespace ptot
