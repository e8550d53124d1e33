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

#include <vector>

#include "ptot/point_cloud.h"

namespace ptot {

// Pinhole intrinsics. Pixel centers sit at integer coordinates
// (u, v) in {0..width-1} x {0..height-1}.
struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;

  // Throws PreconditionError unless fx, fy > 0 and the principal point
  // lies inside the image.
  void Validate() const;

  // Square image with focal length 0.75 * width and a centered principal
  // point. Used by the synthetic scenes.
  static CameraIntrinsics Centered(int width, int height);
};

// Row-major grid of depths in meters; 0 marks a missing measurement.
class DepthMap {
 public:
  DepthMap(int width, int height);
  DepthMap(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  double at(int u, int v) const { return values_[v * width_ + u]; }
  void set(int u, int v, double depth);
  const std::vector<double>& values() const { return values_; }
  size_t CountValid() const;

  bool operator==(const DepthMap& other) const = default;

 private:
  int width_;
  int height_;
  std::vector<double> values_;
};

// One point per pixel with depth z > 0, in row-major pixel order:
// x = (u - cx) z / fx, y = (v - cy) z / fy.
PointCloud Backproject(const DepthMap& depth, const CameraIntrinsics& cam);

// Z-buffered rasterization: each point lands on the nearest pixel center,
// the smallest depth wins, points outside the frame are dropped and
// uncovered pixels hold 0. Every point must have z > 0.
DepthMap Project(const PointCloud& cloud, const CameraIntrinsics& cam);

}  // namespace ptot
