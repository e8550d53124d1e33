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

#include <map>
#include <string>
#include <vector>

#include "ptot/point_cloud.h"

namespace ptot {

inline constexpr double kDefaultPercentile = 90.0;
// Report radii in meters, in table column order.
inline const std::vector<double> kDefaultRadii = {0.50, 0.25, 0.10};

// Percentage of ground-truth points that have a predicted point inside the
// closed ball of `radius` meters around them.
double Completeness(const PointCloud& pred, const PointCloud& gt, double radius);

// r-th percentile (nearest rank) of |p - nn_gt(p)| over predicted points, in
// meters.
double Accuracy(const PointCloud& pred, const PointCloud& gt,
                double r_percentile = kDefaultPercentile);

// Same percentile over |p - nn_gt(p)| / |nn_gt(p)|. Throws if a matched
// ground-truth point sits at the origin.
double RelativeAccuracy(const PointCloud& pred, const PointCloud& gt,
                        double r_percentile = kDefaultPercentile);

// Nearest-rank percentile: sorted ascending, element ceil(r/100 * n) - 1.
double NearestRankPercentile(std::vector<double> values, double r_percentile);

struct MetricsReport {
  // radius (m) -> completeness (%).
  std::map<double, double> completeness_at;
  double accuracy_m = 0.0;
  double relative_accuracy = 0.0;
  double percentile_r = kDefaultPercentile;
  size_t n_pred = 0;
  size_t n_gt = 0;

  // Completeness at `radius`; throws if the radius was not evaluated.
  double completeness(double radius) const;
};

MetricsReport FullReport(const PointCloud& pred, const PointCloud& gt,
                         const std::vector<double>& radii = kDefaultRadii,
                         double r_percentile = kDefaultPercentile);

// Flat key-value table, one "key value" per line, table column order.
std::string FormatReportTable(const MetricsReport& report);

// One-line JSON object; numbers with 17 significant digits. Keys for the
// default radii are completeness_50cm, completeness_25cm, completeness_10cm.
std::string FormatReportJson(const MetricsReport& report);

// "completeness_50cm" etc. Radii are rounded to whole centimeters.
std::string CompletenessKey(double radius);

}  // namespace ptot
