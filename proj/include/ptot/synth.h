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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ptot/camera.h"
#include "ptot/image.h"
#include "ptot/point_cloud.h"

namespace ptot {

// Axis-aligned box in camera coordinates (x right, y down, z forward).
struct Box {
  Point3 center = Point3::Zero();
  Point3 extents = Point3::Ones();  // full side lengths, meters
};

// Camera sits at the origin looking down +z. Surfaces outside the depth
// range [kMinDepth, kMaxDepth] are not visible.
struct SceneSpec {
  static constexpr double kMinDepth = 1.0;
  static constexpr double kMaxDepth = 20.0;

  uint64_t seed = 0;
  // Ground plane y = ground_height (below the camera when positive).
  std::optional<double> ground_height;
  // Fronto-parallel wall z = wall_depth closing the scene.
  std::optional<double> wall_depth;
  std::vector<Box> boxes;

  void Validate() const;
};

struct SynthOptions {
  size_t gt_points = 512;
  double noise_sigma = 0.01;

  // Defaults with gt_points capped at the pixel count of `cam`.
  static SynthOptions ForCamera(const CameraIntrinsics& cam);
};

struct Scene {
  SceneSpec spec;
  CameraIntrinsics camera;
  DepthMap depth;  // noise-free ray-cast depth
  GrayImage image;  // inverse depth (1 m / z) plus Gaussian noise, clamped to [0, 1]
  PointCloud gt;
};

// Depth along the ray through pixel direction (dx, dy, 1), or nullopt if no
// visible surface is hit.
std::optional<double> CastRay(const SceneSpec& spec, double dx, double dy);

DepthMap RenderDepth(const SceneSpec& spec, const CameraIntrinsics& cam);

// Renders `spec`: image from the depth map with noise seeded by spec.seed,
// ground truth = back-projected depth subsampled to opts.gt_points.
Scene RenderScene(const SceneSpec& spec, const CameraIntrinsics& cam,
                  const SynthOptions& opts = {});

// Random ground plane, back wall and 1-4 boxes resting on the ground.
SceneSpec SampleSceneSpec(uint64_t seed);

Scene GenerateScene(uint64_t seed, const CameraIntrinsics& cam,
                    const SynthOptions& opts = {});

// Scenes for seeds base_seed .. base_seed + n_scenes - 1.
std::vector<Scene> GenerateSplit(size_t n_scenes, uint64_t base_seed,
                                 const CameraIntrinsics& cam,
                                 const SynthOptions& opts = {});

// Writes <stem>.depth, <stem>.xyz and <stem>.img next to each other.
void ExportScene(const Scene& scene, const std::filesystem::path& stem);

// FNV-1a over the exported text of image, depth and ground truth.
uint64_t SceneHash(const Scene& scene);

}  // namespace ptot
