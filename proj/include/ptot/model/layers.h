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

#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace ptot::model {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Feature maps are stored as (channels x height*width), row-major pixels.

// Unfolds 3x3 zero-padded neighborhoods: row c*9 + ky*3 + kx, column
// y*w + x holds in(c, (y+ky-1)*w + (x+kx-1)).
RowMatrix Im2Col3x3(const RowMatrix& in, int h, int w);
// Adjoint of Im2Col3x3.
RowMatrix Col2Im3x3(const RowMatrix& cols, int channels, int h, int w);

inline constexpr double kInstanceNormEpsilon = 1e-5;

struct InstanceNormCache {
  RowMatrix normalized;
  Eigen::VectorXd inv_std;
};

// Per-channel (x - mean) / sqrt(var + eps) with the biased variance.
// Constant channels map to exactly zero.
RowMatrix InstanceNormForward(const RowMatrix& x, InstanceNormCache* cache);
RowMatrix InstanceNormBackward(const InstanceNormCache& cache,
                               const RowMatrix& d_normalized);

// 2x2 max pooling with stride 2; h and w must be even. `argmax` receives the
// input column of each output element (first maximum wins).
RowMatrix MaxPool2x2Forward(const RowMatrix& x, int h, int w,
                            std::vector<int>* argmax);
RowMatrix MaxPool2x2Backward(const RowMatrix& dy, const std::vector<int>& argmax,
                             int in_cols);

inline double Softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace ptot::model
