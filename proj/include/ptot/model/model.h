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
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ptot/image.h"
#include "ptot/model/params.h"
#include "ptot/point_cloud.h"

namespace ptot::model {

// Image -> coarse cloud -> densified cloud network.
//
// Encoder: per block, 3x3 conv (no bias) -> instance norm with affine
// scale/shift -> ReLU -> 2x2 max pool; then global average pooling and a
// ReLU dense layer producing `feature_dim` values.
// Coarse head: dense feature -> 3K raw values; x = s*r0, y = s*r1,
// z = min_depth + s*softplus(r2) with s = output_scale.
// Densifier: local = shared MLP(xyz/s) per coarse point (ReLU layers);
// global = max over points of a second shared MLP applied to local.
// Each point is cloned n = g*g times; clone c is described by
// [xyz/s | local | global | grid offset c] and a refinement MLP (ReLU
// hidden layers, linear output) yields an offset: out = xyz + s*offset.
// Output order is point-major, clone-minor.
struct ModelConfig {
  int image_width = 64;
  int image_height = 64;
  int coarse_points = 64;
  int densify_factor = 4;
  std::vector<int> encoder_channels = {8, 16, 32};
  int feature_dim = 128;
  std::vector<int> local_mlp = {32, 32};
  std::vector<int> global_mlp = {64};
  std::vector<int> refine_mlp = {64, 64};
  double output_scale = 10.0;  // meters per unit of raw head output
  double min_depth = 0.1;      // floor on predicted coarse depth, meters

  void Validate() const;
  int grid_size() const;  // g with g*g == densify_factor
  int output_points() const { return coarse_points * densify_factor; }

  static ModelConfig DeskScale() { return {}; }
  // 8x8 image, K = 4, n = 4; small enough for exhaustive gradient checks.
  static ModelConfig Miniature();

  bool operator==(const ModelConfig& other) const = default;
};

// Row-major centers of a g x g lattice of cells spanning [-1, 1]^2.
std::vector<Eigen::Vector2d> GridOffsets(int grid_size);

class CloudPredictor {
 public:
  // Fresh parameters: weights and biases uniform in +-1/sqrt(fan_in),
  // instance-norm scale 1 and shift 0, gradients zero.
  CloudPredictor(const ModelConfig& cfg, uint64_t seed);
  // Adopts existing parameters; throws PreconditionError on any tensor
  // name or shape mismatch with `cfg`.
  CloudPredictor(const ModelConfig& cfg, ModelParams params);
  ~CloudPredictor();
  CloudPredictor(CloudPredictor&&) noexcept;
  CloudPredictor& operator=(CloudPredictor&&) noexcept;
  CloudPredictor(const CloudPredictor& other);

  const ModelConfig& config() const { return cfg_; }
  const ModelParams& params() const { return params_; }
  // Mutable access invalidates any recorded forward pass.
  ModelParams& mutable_params();

  Eigen::VectorXd Encode(const GrayImage& image) const;
  PointCloud CoarsePredict(const Eigen::VectorXd& feature) const;
  PointCloud Densify(const PointCloud& coarse) const;
  // Forward pass without recording; safe to call concurrently.
  PointCloud Predict(const GrayImage& image) const;

  // Forward pass that records the activations Backward needs.
  PointCloud Forward(const GrayImage& image);
  // Accumulates d/dtheta sum_i <upstream_i, output_i> into the gradient
  // buffers. Requires a recorded Forward with unchanged parameters.
  void Backward(std::span<const Point3> upstream);
  bool has_tape() const { return tape_ != nullptr; }
  void ZeroGrad() { params_.ZeroGrad(); }

  // Shape table implied by a config, in parameter order.
  static ModelParams ShapeTemplate(const ModelConfig& cfg);

 private:
  struct Layout;
  struct Tape;

  static Layout BuildLayout(const ModelConfig& cfg, ModelParams* params);
  Eigen::VectorXd EncodeImpl(const GrayImage& image, Tape* tape) const;
  std::vector<Point3> HeadImpl(const Eigen::VectorXd& feature, Tape* tape) const;
  std::vector<Point3> DensifyImpl(const std::vector<Point3>& coarse,
                                  Tape* tape) const;
  PointCloud Run(const GrayImage& image, Tape* tape) const;

  ModelConfig cfg_;
  ModelParams params_;
  std::unique_ptr<Layout> layout_;
  std::unique_ptr<Tape> tape_;
};

}  // namespace ptot::model
