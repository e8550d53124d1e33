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

#include "ptot/camera.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace ptot {

void CameraIntrinsics::Validate() const {
  Require(std::isfinite(fx) && fx > 0.0, "fx must be positive");
  Require(std::isfinite(fy) && fy > 0.0, "fy must be positive");
  Require(width > 0 && height > 0, "image size must be positive");
  Require(cx >= 0.0 && cx < width, "cx must lie in [0, width)");
  Require(cy >= 0.0 && cy < height, "cy must lie in [0, height)");
}

CameraIntrinsics CameraIntrinsics::Centered(int width, int height) {
  CameraIntrinsics cam;
  cam.width = width;
  cam.height = height;
  cam.fx = 0.75 * width;
  cam.fy = 0.75 * width;
  cam.cx = 0.5 * (width - 1);
  cam.cy = 0.5 * (height - 1);
  return cam;
}

DepthMap::DepthMap(int width, int height)
    : DepthMap(width, height,
               std::vector<double>(static_cast<size_t>(std::max(width, 0)) *
                                   std::max(height, 0))) {}

DepthMap::DepthMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  Require(width > 0 && height > 0, "depth map size must be positive");
  Require(values_.size() == static_cast<size_t>(width) * height,
          "depth map holds " + std::to_string(values_.size()) +
              " values, expected " + std::to_string(width * height));
  for (double d : values_) {
    Require(std::isfinite(d) && d >= 0.0,
            "depth values must be finite and non-negative");
  }
}

void DepthMap::set(int u, int v, double depth) {
  Require(std::isfinite(depth) && depth >= 0.0,
          "depth values must be finite and non-negative");
  values_[v * width_ + u] = depth;
}

size_t DepthMap::CountValid() const {
  size_t n = 0;
  for (double d : values_) n += d > 0.0;
  return n;
}

PointCloud Backproject(const DepthMap& depth, const CameraIntrinsics& cam) {
  cam.Validate();
  Require(depth.width() == cam.width && depth.height() == cam.height,
          "depth map size does not match the camera");
  Require(depth.CountValid() > 0, "depth map has no valid measurement");
  std::vector<Point3> points;
  points.reserve(depth.CountValid());
  for (int v = 0; v < depth.height(); ++v) {
    for (int u = 0; u < depth.width(); ++u) {
      const double z = depth.at(u, v);
      if (z <= 0.0) continue;
      points.emplace_back((u - cam.cx) * z / cam.fx, (v - cam.cy) * z / cam.fy,
                          z);
    }
  }
  return PointCloud(std::move(points));
}

DepthMap Project(const PointCloud& cloud, const CameraIntrinsics& cam) {
  cam.Validate();
  DepthMap depth(cam.width, cam.height);
  for (size_t i = 0; i < cloud.size(); ++i) {
    const Point3& p = cloud[i];
    Require(p.z() > 0.0,
            "point " + std::to_string(i) + " has non-positive depth");
    const double u = std::round(cam.fx * p.x() / p.z() + cam.cx);
    const double v = std::round(cam.fy * p.y() / p.z() + cam.cy);
    if (u < 0 || v < 0 || u >= cam.width || v >= cam.height) continue;
    const int iu = static_cast<int>(u);
    const int iv = static_cast<int>(v);
    const double current = depth.at(iu, iv);
    if (current == 0.0 || p.z() < current) depth.set(iu, iv, p.z());
  }
  return depth;
}

}  // namespace ptot
