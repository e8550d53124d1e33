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

#include "ptot/synth.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ptot/io.h"
#include "ptot/rng.h"

namespace ptot {
namespace {

enum Stream : uint64_t { kSpecStream = 1, kNoiseStream = 2, kSubsampleStream = 3 };

// Entry depth of the ray t * (dx, dy, 1) into `box`, if it enters in front
// of the camera.
std::optional<double> IntersectBox(const Box& box, const Point3& dir) {
  double t_near = 0.0;
  double t_far = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const double lo = box.center[k] - 0.5 * box.extents[k];
    const double hi = box.center[k] + 0.5 * box.extents[k];
    if (dir[k] == 0.0) {
      if (lo > 0.0 || hi < 0.0) return std::nullopt;
      continue;
    }
    double t0 = lo / dir[k];
    double t1 = hi / dir[k];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
  }
  if (t_near > t_far || t_near <= 0.0) return std::nullopt;
  return t_near;
}

}  // namespace

void SceneSpec::Validate() const {
  if (ground_height) {
    Require(std::isfinite(*ground_height) && *ground_height > 0.0,
            "ground plane must lie below the camera");
  }
  if (wall_depth) {
    Require(*wall_depth >= kMinDepth && *wall_depth <= kMaxDepth,
            "wall depth must lie in the visible depth range");
  }
  for (const Box& box : boxes) {
    Require(box.center.allFinite() && box.extents.allFinite(),
            "box parameters must be finite");
    Require((box.extents.array() > 0.0).all(), "box extents must be positive");
    Require(box.center.z() - 0.5 * box.extents.z() >= kMinDepth,
            "box must lie in front of the camera");
  }
}

std::optional<double> CastRay(const SceneSpec& spec, double dx, double dy) {
  const Point3 dir(dx, dy, 1.0);
  double best = std::numeric_limits<double>::infinity();
  if (spec.ground_height && dy > 0.0) best = std::min(best, *spec.ground_height / dy);
  if (spec.wall_depth) best = std::min(best, *spec.wall_depth);
  for (const Box& box : spec.boxes) {
    if (const auto t = IntersectBox(box, dir)) best = std::min(best, *t);
  }
  if (best < SceneSpec::kMinDepth || best > SceneSpec::kMaxDepth) {
    return std::nullopt;
  }
  return best;
}

DepthMap RenderDepth(const SceneSpec& spec, const CameraIntrinsics& cam) {
  spec.Validate();
  cam.Validate();
  DepthMap depth(cam.width, cam.height);
  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      const auto z = CastRay(spec, (u - cam.cx) / cam.fx, (v - cam.cy) / cam.fy);
      if (z) depth.set(u, v, *z);
    }
  }
  return depth;
}

Scene RenderScene(const SceneSpec& spec, const CameraIntrinsics& cam,
                  const SynthOptions& opts) {
  Require(opts.gt_points >= 1, "ground truth needs at least one point");
  Require(opts.noise_sigma >= 0.0, "noise sigma must be non-negative");
  DepthMap depth = RenderDepth(spec, cam);
  Require(depth.CountValid() >= opts.gt_points,
          "scene exposes " + std::to_string(depth.CountValid()) +
              " valid pixels, fewer than the " +
              std::to_string(opts.gt_points) + " requested ground-truth points");

  GrayImage image(cam.width, cam.height);
  Rng noise(DeriveSeed(spec.seed, kNoiseStream));
  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      const double z = depth.at(u, v);
      const double clean = z > 0.0 ? SceneSpec::kMinDepth / z : 0.0;
      image.at(u, v) =
          std::clamp(clean + opts.noise_sigma * noise.Normal(), 0.0, 1.0);
    }
  }
  PointCloud gt = Subsample(Backproject(depth, cam), opts.gt_points,
                            DeriveSeed(spec.seed, kSubsampleStream));
  return Scene{spec, cam, std::move(depth), std::move(image), std::move(gt)};
}

SceneSpec SampleSceneSpec(uint64_t seed) {
  Rng rng(DeriveSeed(seed, kSpecStream));
  SceneSpec spec;
  spec.seed = seed;
  const double ground = rng.Uniform(1.2, 1.8);
  const double wall = rng.Uniform(14.0, SceneSpec::kMaxDepth);
  spec.ground_height = ground;
  spec.wall_depth = wall;
  const int n_boxes = 1 + static_cast<int>(rng.UniformIndex(4));
  for (int b = 0; b < n_boxes; ++b) {
    Box box;
    box.extents = Point3(rng.Uniform(1.0, 3.0), rng.Uniform(1.0, 2.5),
                         rng.Uniform(1.0, 3.0));
    const double z = rng.Uniform(3.0 + 0.5 * box.extents.z(),
                                 wall - 1.0 - 0.5 * box.extents.z());
    const double x = rng.Uniform(-0.4, 0.4) * z;
    box.center = Point3(x, ground - 0.5 * box.extents.y(), z);
    spec.boxes.push_back(box);
  }
  return spec;
}

SynthOptions SynthOptions::ForCamera(const CameraIntrinsics& cam) {
  SynthOptions opts;
  opts.gt_points = std::min(opts.gt_points,
                            static_cast<size_t>(cam.width) * cam.height);
  return opts;
}

Scene GenerateScene(uint64_t seed, const CameraIntrinsics& cam,
                    const SynthOptions& opts) {
  return RenderScene(SampleSceneSpec(seed), cam, opts);
}

std::vector<Scene> GenerateSplit(size_t n_scenes, uint64_t base_seed,
                                 const CameraIntrinsics& cam,
                                 const SynthOptions& opts) {
  Require(n_scenes >= 1, "a split needs at least one scene");
  std::vector<Scene> scenes;
  scenes.reserve(n_scenes);
  for (size_t i = 0; i < n_scenes; ++i) {
    scenes.push_back(GenerateScene(base_seed + i, cam, opts));
  }
  return scenes;
}

void ExportScene(const Scene& scene, const std::filesystem::path& stem) {
  auto with = [&](const char* ext) {
    std::filesystem::path p = stem;
    p += ext;
    return p;
  };
  SaveDepth(scene.depth, with(".depth"));
  SaveXyz(scene.gt, with(".xyz"));
  SaveImage(scene.image, with(".img"));
}

uint64_t SceneHash(const Scene& scene) {
  uint64_t h = Fnv1a("scene");
  auto mix = [&](double value) { h = Fnv1a(FormatDouble(value) + ";", h); };
  for (double v : scene.image.values) mix(v);
  for (double d : scene.depth.values()) mix(d);
  for (const Point3& p : scene.gt) {
    mix(p.x());
    mix(p.y());
    mix(p.z());
  }
  return h;
}

}  // namespace ptot
