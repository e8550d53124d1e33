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

#include "ptot/model/model.h"

#include <cmath>
#include <string>

#include "ptot/common.h"
#include "ptot/model/layers.h"
#include "ptot/rng.h"

namespace ptot::model {
namespace {

struct Dense {
  int weight = -1;
  int bias = -1;
  int in = 0;
  int out = 0;
};

struct MlpTape {
  std::vector<RowMatrix> inputs;
  std::vector<RowMatrix> pre;
};

Eigen::Map<const RowMatrix> Weights(const ModelParams& p, const Dense& d) {
  return Eigen::Map<const RowMatrix>(p.at(d.weight).value.data(), d.out, d.in);
}

Eigen::Map<const Eigen::RowVectorXd> Bias(const ModelParams& p, const Dense& d) {
  return Eigen::Map<const Eigen::RowVectorXd>(p.at(d.bias).value.data(), d.out);
}

// Rows are samples. ReLU after every layer except the last when
// `linear_last` is set.
RowMatrix MlpForward(const ModelParams& p, const std::vector<Dense>& layers,
                     bool linear_last, RowMatrix x, MlpTape* tape) {
  if (tape != nullptr) {
    tape->inputs.clear();
    tape->pre.clear();
  }
  for (size_t l = 0; l < layers.size(); ++l) {
    RowMatrix pre = x * Weights(p, layers[l]).transpose();
    pre.rowwise() += Bias(p, layers[l]);
    if (tape != nullptr) {
      tape->inputs.push_back(std::move(x));
      tape->pre.push_back(pre);
    }
    const bool relu = !(linear_last && l + 1 == layers.size());
    x = relu ? RowMatrix(pre.cwiseMax(0.0)) : std::move(pre);
  }
  return x;
}

RowMatrix MlpBackward(ModelParams& p, const std::vector<Dense>& layers,
                      bool linear_last, const MlpTape& tape, RowMatrix dy) {
  for (size_t l = layers.size(); l-- > 0;) {
    const Dense& d = layers[l];
    const bool relu = !(linear_last && l + 1 == layers.size());
    if (relu) dy = (tape.pre[l].array() > 0.0).select(dy, 0.0);
    Eigen::Map<RowMatrix>(p.at(d.weight).grad.data(), d.out, d.in) +=
        dy.transpose() * tape.inputs[l];
    Eigen::Map<Eigen::RowVectorXd>(p.at(d.bias).grad.data(), d.out) +=
        dy.colwise().sum();
    dy = dy * Weights(p, d);
  }
  return dy;
}

bool IsPerfectSquare(int n, int* root) {
  const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (root != nullptr) *root = r;
  return r * r == n;
}

}  // namespace

struct CloudPredictor::Layout {
  struct Block {
    int conv = -1;
    int scale = -1;
    int shift = -1;
    int in_channels = 0;
    int out_channels = 0;
  };
  std::vector<Block> encoder;
  Dense feature;
  Dense head;
  std::vector<Dense> local;
  std::vector<Dense> global;
  std::vector<Dense> refine;
};

struct CloudPredictor::Tape {
  struct Block {
    int h = 0;
    int w = 0;
    RowMatrix cols;
    InstanceNormCache norm;
    RowMatrix affine;
    std::vector<int> pool_argmax;
  };
  std::vector<Block> blocks;
  int final_pixels = 0;
  Eigen::VectorXd pooled;
  Eigen::VectorXd feature_pre;
  Eigen::VectorXd feature;
  Eigen::VectorXd raw;
  RowMatrix xyz;
  MlpTape local;
  MlpTape global;
  std::vector<int> global_argmax;
  MlpTape refine;
};

void ModelConfig::Validate() const {
  Require(image_width > 0 && image_height > 0, "image size must be positive");
  Require(coarse_points >= 1, "coarse point count must be at least 1");
  Require(densify_factor >= 1 && IsPerfectSquare(densify_factor, nullptr),
          "densify factor must be a perfect square");
  Require(!encoder_channels.empty(), "encoder needs at least one block");
  const int divisor = 1 << encoder_channels.size();
  Require(image_width % divisor == 0 && image_height % divisor == 0,
          "image size must be divisible by 2^(encoder blocks)");
  Require(feature_dim >= 1, "feature_dim must be at least 1");
  Require(!local_mlp.empty() && !global_mlp.empty(),
          "local and global MLPs need at least one layer");
  for (const auto* widths : {&encoder_channels, &local_mlp, &global_mlp,
                             &refine_mlp}) {
    for (int w : *widths) Require(w >= 1, "layer widths must be at least 1");
  }
  Require(std::isfinite(output_scale) && output_scale > 0.0,
          "output scale must be positive");
  Require(std::isfinite(min_depth) && min_depth >= 0.0,
          "min depth must be non-negative");
}

int ModelConfig::grid_size() const {
  int root = 0;
  IsPerfectSquare(densify_factor, &root);
  return root;
}

ModelConfig ModelConfig::Miniature() {
  ModelConfig cfg;
  cfg.image_width = 8;
  cfg.image_height = 8;
  cfg.coarse_points = 4;
  cfg.densify_factor = 4;
  cfg.encoder_channels = {4, 4};
  cfg.feature_dim = 8;
  cfg.local_mlp = {8};
  cfg.global_mlp = {8};
  cfg.refine_mlp = {8};
  return cfg;
}

std::vector<Eigen::Vector2d> GridOffsets(int grid_size) {
  Require(grid_size >= 1, "grid size must be at least 1");
  std::vector<Eigen::Vector2d> offsets;
  offsets.reserve(grid_size * grid_size);
  const double cell = 2.0 / grid_size;
  for (int row = 0; row < grid_size; ++row) {
    for (int col = 0; col < grid_size; ++col) {
      offsets.emplace_back(-1.0 + (col + 0.5) * cell, -1.0 + (row + 0.5) * cell);
    }
  }
  return offsets;
}

CloudPredictor::Layout CloudPredictor::BuildLayout(const ModelConfig& cfg,
                                                   ModelParams* params) {
  cfg.Validate();
  Layout layout;
  int in = 1;
  for (size_t b = 0; b < cfg.encoder_channels.size(); ++b) {
    const int out = cfg.encoder_channels[b];
    const std::string prefix = "encoder." + std::to_string(b);
    Layout::Block block;
    block.conv = params->Add(prefix + ".conv.weight", {out, in, 3, 3});
    block.scale = params->Add(prefix + ".norm.scale", {out});
    block.shift = params->Add(prefix + ".norm.shift", {out});
    block.in_channels = in;
    block.out_channels = out;
    layout.encoder.push_back(block);
    in = out;
  }
  auto dense = [&](const std::string& name, int fan_in, int fan_out) {
    Dense d;
    d.weight = params->Add(name + ".weight", {fan_out, fan_in});
    d.bias = params->Add(name + ".bias", {fan_out});
    d.in = fan_in;
    d.out = fan_out;
    return d;
  };
  layout.feature = dense("encoder.fc", in, cfg.feature_dim);
  layout.head = dense("head", cfg.feature_dim, 3 * cfg.coarse_points);
  in = 3;
  for (size_t l = 0; l < cfg.local_mlp.size(); ++l) {
    layout.local.push_back(
        dense("local." + std::to_string(l), in, cfg.local_mlp[l]));
    in = cfg.local_mlp[l];
  }
  const int local_dim = in;
  for (size_t l = 0; l < cfg.global_mlp.size(); ++l) {
    layout.global.push_back(
        dense("global." + std::to_string(l), in, cfg.global_mlp[l]));
    in = cfg.global_mlp[l];
  }
  in = 3 + local_dim + in + 2;
  for (size_t l = 0; l < cfg.refine_mlp.size(); ++l) {
    layout.refine.push_back(
        dense("refine." + std::to_string(l), in, cfg.refine_mlp[l]));
    in = cfg.refine_mlp[l];
  }
  layout.refine.push_back(
      dense("refine." + std::to_string(cfg.refine_mlp.size()), in, 3));
  return layout;
}

ModelParams CloudPredictor::ShapeTemplate(const ModelConfig& cfg) {
  ModelParams params;
  BuildLayout(cfg, &params);
  return params;
}

CloudPredictor::CloudPredictor(const ModelConfig& cfg, uint64_t seed)
    : cfg_(cfg) {
  layout_ = std::make_unique<Layout>(BuildLayout(cfg_, &params_));
  Rng rng(seed);
  auto fill_uniform = [&](int index, int fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& v : params_.at(index).value) v = rng.Uniform(-bound, bound);
  };
  for (const Layout::Block& b : layout_->encoder) {
    fill_uniform(b.conv, b.in_channels * 9);
    for (double& v : params_.at(b.scale).value) v = 1.0;
  }
  auto fill_dense = [&](const Dense& d) {
    fill_uniform(d.weight, d.in);
    fill_uniform(d.bias, d.in);
  };
  fill_dense(layout_->feature);
  fill_dense(layout_->head);
  for (const auto* mlp : {&layout_->local, &layout_->global, &layout_->refine}) {
    for (const Dense& d : *mlp) fill_dense(d);
  }
}

CloudPredictor::CloudPredictor(const ModelConfig& cfg, ModelParams params)
    : cfg_(cfg), params_(std::move(params)) {
  ModelParams expected;
  layout_ = std::make_unique<Layout>(BuildLayout(cfg_, &expected));
  Require(expected.tensors().size() == params_.tensors().size(),
          "parameters hold " + std::to_string(params_.tensors().size()) +
              " tensors, config implies " +
              std::to_string(expected.tensors().size()));
  for (size_t i = 0; i < expected.tensors().size(); ++i) {
    const Tensor& want = expected.tensors()[i];
    Tensor& got = params_.tensors()[i];
    Require(want.name == got.name && want.shape == got.shape &&
                want.size() == got.value.size(),
            "tensor '" + got.name + "' does not match expected '" + want.name +
                "' and its shape");
    got.grad.assign(got.value.size(), 0.0);
  }
  Require(params_.AllFinite(), "parameters must be finite");
}

CloudPredictor::~CloudPredictor() = default;
CloudPredictor::CloudPredictor(CloudPredictor&&) noexcept = default;
CloudPredictor& CloudPredictor::operator=(CloudPredictor&&) noexcept = default;

CloudPredictor::CloudPredictor(const CloudPredictor& other)
    : cfg_(other.cfg_),
      params_(other.params_),
      layout_(std::make_unique<Layout>(*other.layout_)) {}

ModelParams& CloudPredictor::mutable_params() {
  tape_.reset();
  return params_;
}

Eigen::VectorXd CloudPredictor::EncodeImpl(const GrayImage& image,
                                           Tape* tape) const {
  Require(image.width == cfg_.image_width && image.height == cfg_.image_height,
          "image is " + std::to_string(image.width) + "x" +
              std::to_string(image.height) + ", model expects " +
              std::to_string(cfg_.image_width) + "x" +
              std::to_string(cfg_.image_height));
  Require(image.values.size() == size_t(image.width) * image.height,
          "image value count mismatch");
  int h = image.height;
  int w = image.width;
  RowMatrix x = Eigen::Map<const RowMatrix>(image.values.data(), 1, h * w);
  if (tape != nullptr) tape->blocks.clear();
  for (const Layout::Block& b : layout_->encoder) {
    Tape::Block record;
    record.h = h;
    record.w = w;
    RowMatrix cols = Im2Col3x3(x, h, w);
    const RowMatrix conv =
        Eigen::Map<const RowMatrix>(params_.at(b.conv).value.data(),
                                    b.out_channels, b.in_channels * 9) *
        cols;
    RowMatrix affine =
        InstanceNormForward(conv, tape != nullptr ? &record.norm : nullptr);
    for (int c = 0; c < b.out_channels; ++c) {
      affine.row(c).array() = affine.row(c).array() *
                                  params_.at(b.scale).value[c] +
                              params_.at(b.shift).value[c];
    }
    const RowMatrix act = affine.cwiseMax(0.0);
    x = MaxPool2x2Forward(act, h, w,
                          tape != nullptr ? &record.pool_argmax : nullptr);
    h /= 2;
    w /= 2;
    if (tape != nullptr) {
      record.cols = std::move(cols);
      record.affine = std::move(affine);
      tape->blocks.push_back(std::move(record));
    }
  }
  const Eigen::VectorXd pooled = x.rowwise().mean();
  const Dense& fc = layout_->feature;
  const Eigen::VectorXd pre =
      Eigen::Map<const RowMatrix>(params_.at(fc.weight).value.data(), fc.out,
                                  fc.in) *
          pooled +
      Eigen::Map<const Eigen::VectorXd>(params_.at(fc.bias).value.data(),
                                        fc.out);
  Eigen::VectorXd feature = pre.cwiseMax(0.0);
  if (tape != nullptr) {
    tape->final_pixels = h * w;
    tape->pooled = pooled;
    tape->feature_pre = pre;
    tape->feature = feature;
  }
  return feature;
}

std::vector<Point3> CloudPredictor::HeadImpl(const Eigen::VectorXd& feature,
                                             Tape* tape) const {
  const Dense& head = layout_->head;
  Require(feature.size() == head.in,
          "feature has " + std::to_string(feature.size()) +
              " entries, model expects " + std::to_string(head.in));
  const Eigen::VectorXd raw =
      Eigen::Map<const RowMatrix>(params_.at(head.weight).value.data(),
                                  head.out, head.in) *
          feature +
      Eigen::Map<const Eigen::VectorXd>(params_.at(head.bias).value.data(),
                                        head.out);
  const double s = cfg_.output_scale;
  std::vector<Point3> xyz(cfg_.coarse_points);
  for (int k = 0; k < cfg_.coarse_points; ++k) {
    xyz[k] = Point3(s * raw[3 * k], s * raw[3 * k + 1],
                    cfg_.min_depth + s * Softplus(raw[3 * k + 2]));
  }
  if (tape != nullptr) tape->raw = raw;
  return xyz;
}

std::vector<Point3> CloudPredictor::DensifyImpl(const std::vector<Point3>& coarse,
                                                Tape* tape) const {
  const int k_points = cfg_.coarse_points;
  Require(static_cast<int>(coarse.size()) == k_points,
          "densify expects " + std::to_string(k_points) + " coarse points, got " +
              std::to_string(coarse.size()));
  const double s = cfg_.output_scale;
  const int n = cfg_.densify_factor;
  RowMatrix xyz(k_points, 3);
  for (int k = 0; k < k_points; ++k) xyz.row(k) = coarse[k].transpose();
  const RowMatrix normalized = xyz / s;

  const RowMatrix local = MlpForward(params_, layout_->local, false, normalized,
                                     tape != nullptr ? &tape->local : nullptr);
  const RowMatrix global_pre = MlpForward(
      params_, layout_->global, false, local,
      tape != nullptr ? &tape->global : nullptr);
  const int local_dim = static_cast<int>(local.cols());
  const int global_dim = static_cast<int>(global_pre.cols());
  Eigen::RowVectorXd global(global_dim);
  std::vector<int> argmax(global_dim, 0);
  for (int g = 0; g < global_dim; ++g) {
    for (int k = 1; k < k_points; ++k) {
      if (global_pre(k, g) > global_pre(argmax[g], g)) argmax[g] = k;
    }
    global[g] = global_pre(argmax[g], g);
  }

  const std::vector<Eigen::Vector2d> grid = GridOffsets(cfg_.grid_size());
  RowMatrix descriptors(k_points * n, 3 + local_dim + global_dim + 2);
  for (int k = 0; k < k_points; ++k) {
    for (int c = 0; c < n; ++c) {
      auto row = descriptors.row(k * n + c);
      row.segment(0, 3) = normalized.row(k);
      row.segment(3, local_dim) = local.row(k);
      row.segment(3 + local_dim, global_dim) = global;
      row.segment(3 + local_dim + global_dim, 2) = grid[c].transpose();
    }
  }
  const RowMatrix offsets =
      MlpForward(params_, layout_->refine, true, std::move(descriptors),
                 tape != nullptr ? &tape->refine : nullptr);

  std::vector<Point3> out(static_cast<size_t>(k_points) * n);
  for (int k = 0; k < k_points; ++k) {
    for (int c = 0; c < n; ++c) {
      out[k * n + c] = coarse[k] + s * offsets.row(k * n + c).transpose();
    }
  }
  if (tape != nullptr) {
    tape->xyz = xyz;
    tape->global_argmax = std::move(argmax);
  }
  return out;
}

Eigen::VectorXd CloudPredictor::Encode(const GrayImage& image) const {
  return EncodeImpl(image, nullptr);
}

PointCloud CloudPredictor::CoarsePredict(const Eigen::VectorXd& feature) const {
  return PointCloud(HeadImpl(feature, nullptr));
}

PointCloud CloudPredictor::Densify(const PointCloud& coarse) const {
  return PointCloud(DensifyImpl(coarse.points(), nullptr));
}

PointCloud CloudPredictor::Run(const GrayImage& image, Tape* tape) const {
  const Eigen::VectorXd feature = EncodeImpl(image, tape);
  return PointCloud(DensifyImpl(HeadImpl(feature, tape), tape));
}

PointCloud CloudPredictor::Predict(const GrayImage& image) const {
  return Run(image, nullptr);
}

PointCloud CloudPredictor::Forward(const GrayImage& image) {
  auto tape = std::make_unique<Tape>();
  PointCloud out = Run(image, tape.get());
  tape_ = std::move(tape);
  return out;
}

void CloudPredictor::Backward(std::span<const Point3> upstream) {
  Require(tape_ != nullptr,
          "backward called without a recorded forward pass for the current "
          "parameters");
  const Tape& t = *tape_;
  const int k_points = cfg_.coarse_points;
  const int n = cfg_.densify_factor;
  Require(upstream.size() == static_cast<size_t>(k_points) * n,
          "upstream gradient has " + std::to_string(upstream.size()) +
              " entries, forward produced " + std::to_string(k_points * n));
  const double s = cfg_.output_scale;

  // Densifier. out = xyz + s * offsets.
  RowMatrix d_xyz = RowMatrix::Zero(k_points, 3);
  RowMatrix d_offsets(k_points * n, 3);
  for (int r = 0; r < k_points * n; ++r) {
    d_offsets.row(r) = s * upstream[r].transpose();
    d_xyz.row(r / n) += upstream[r].transpose();
  }
  const RowMatrix d_desc =
      MlpBackward(params_, layout_->refine, true, t.refine, std::move(d_offsets));
  const int local_dim = static_cast<int>(t.local.pre.back().cols());
  const int global_dim = static_cast<int>(t.global.pre.back().cols());
  RowMatrix d_normalized = RowMatrix::Zero(k_points, 3);
  RowMatrix d_local = RowMatrix::Zero(k_points, local_dim);
  Eigen::RowVectorXd d_global = Eigen::RowVectorXd::Zero(global_dim);
  for (int r = 0; r < k_points * n; ++r) {
    const int k = r / n;
    d_normalized.row(k) += d_desc.row(r).segment(0, 3);
    d_local.row(k) += d_desc.row(r).segment(3, local_dim);
    d_global += d_desc.row(r).segment(3 + local_dim, global_dim);
  }
  RowMatrix d_global_pre = RowMatrix::Zero(k_points, global_dim);
  for (int g = 0; g < global_dim; ++g) {
    d_global_pre(t.global_argmax[g], g) = d_global[g];
  }
  d_local += MlpBackward(params_, layout_->global, false, t.global,
                         std::move(d_global_pre));
  d_normalized +=
      MlpBackward(params_, layout_->local, false, t.local, std::move(d_local));
  d_xyz += d_normalized / s;

  // Coarse head.
  const Dense& head = layout_->head;
  Eigen::VectorXd d_raw(head.out);
  for (int k = 0; k < k_points; ++k) {
    d_raw[3 * k] = s * d_xyz(k, 0);
    d_raw[3 * k + 1] = s * d_xyz(k, 1);
    d_raw[3 * k + 2] = s * Sigmoid(t.raw[3 * k + 2]) * d_xyz(k, 2);
  }
  Eigen::Map<RowMatrix>(params_.at(head.weight).grad.data(), head.out,
                        head.in) += d_raw * t.feature.transpose();
  Eigen::Map<Eigen::VectorXd>(params_.at(head.bias).grad.data(), head.out) +=
      d_raw;
  Eigen::VectorXd d_feature =
      Eigen::Map<const RowMatrix>(params_.at(head.weight).value.data(), head.out,
                                  head.in)
          .transpose() *
      d_raw;

  // Encoder fully connected layer and global average pooling.
  const Dense& fc = layout_->feature;
  const Eigen::VectorXd d_pre =
      (t.feature_pre.array() > 0.0).select(d_feature, 0.0);
  Eigen::Map<RowMatrix>(params_.at(fc.weight).grad.data(), fc.out, fc.in) +=
      d_pre * t.pooled.transpose();
  Eigen::Map<Eigen::VectorXd>(params_.at(fc.bias).grad.data(), fc.out) += d_pre;
  const Eigen::VectorXd d_pooled =
      Eigen::Map<const RowMatrix>(params_.at(fc.weight).value.data(), fc.out,
                                  fc.in)
          .transpose() *
      d_pre;
  RowMatrix d_x(d_pooled.size(), t.final_pixels);
  for (Eigen::Index c = 0; c < d_pooled.size(); ++c) {
    d_x.row(c).setConstant(d_pooled[c] / t.final_pixels);
  }

  // Convolution blocks, last to first.
  for (size_t bi = layout_->encoder.size(); bi-- > 0;) {
    const Layout::Block& b = layout_->encoder[bi];
    const Tape::Block& rec = t.blocks[bi];
    RowMatrix d_affine = MaxPool2x2Backward(d_x, rec.pool_argmax, rec.h * rec.w);
    d_affine = (rec.affine.array() > 0.0).select(d_affine, 0.0);
    Tensor& scale = params_.at(b.scale);
    Tensor& shift = params_.at(b.shift);
    RowMatrix d_norm(d_affine.rows(), d_affine.cols());
    for (int c = 0; c < b.out_channels; ++c) {
      scale.grad[c] += d_affine.row(c).dot(rec.norm.normalized.row(c));
      shift.grad[c] += d_affine.row(c).sum();
      d_norm.row(c) = scale.value[c] * d_affine.row(c);
    }
    const RowMatrix d_conv = InstanceNormBackward(rec.norm, d_norm);
    Eigen::Map<RowMatrix>(params_.at(b.conv).grad.data(), b.out_channels,
                          b.in_channels * 9) += d_conv * rec.cols.transpose();
    if (bi > 0) {
      const RowMatrix d_cols =
          Eigen::Map<const RowMatrix>(params_.at(b.conv).value.data(),
                                      b.out_channels, b.in_channels * 9)
              .transpose() *
          d_conv;
      d_x = Col2Im3x3(d_cols, b.in_channels, rec.h, rec.w);
    }
  }
}

}  // namespace ptot::model
