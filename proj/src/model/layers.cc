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

#include "ptot/model/layers.h"

#include <cmath>

namespace ptot::model {

RowMatrix Im2Col3x3(const RowMatrix& in, int h, int w) {
  const int channels = static_cast<int>(in.rows());
  RowMatrix cols = RowMatrix::Zero(channels * 9, h * w);
  for (int c = 0; c < channels; ++c) {
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        const int row = c * 9 + ky * 3 + kx;
        for (int y = 0; y < h; ++y) {
          const int sy = y + ky - 1;
          if (sy < 0 || sy >= h) continue;
          for (int x = 0; x < w; ++x) {
            const int sx = x + kx - 1;
            if (sx < 0 || sx >= w) continue;
            cols(row, y * w + x) = in(c, sy * w + sx);
          }
        }
      }
    }
  }
  return cols;
}

RowMatrix Col2Im3x3(const RowMatrix& cols, int channels, int h, int w) {
  RowMatrix out = RowMatrix::Zero(channels, h * w);
  for (int c = 0; c < channels; ++c) {
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        const int row = c * 9 + ky * 3 + kx;
        for (int y = 0; y < h; ++y) {
          const int sy = y + ky - 1;
          if (sy < 0 || sy >= h) continue;
          for (int x = 0; x < w; ++x) {
            const int sx = x + kx - 1;
            if (sx < 0 || sx >= w) continue;
            out(c, sy * w + sx) += cols(row, y * w + x);
          }
        }
      }
    }
  }
  return out;
}

RowMatrix InstanceNormForward(const RowMatrix& x, InstanceNormCache* cache) {
  RowMatrix out(x.rows(), x.cols());
  Eigen::VectorXd inv_std(x.rows());
  const double n = static_cast<double>(x.cols());
  for (Eigen::Index c = 0; c < x.rows(); ++c) {
    const auto row = x.row(c);
    inv_std[c] = 1.0 / std::sqrt(kInstanceNormEpsilon);
    if (row.maxCoeff() == row.minCoeff()) {
      out.row(c).setZero();
      continue;
    }
    const double mean = row.sum() / n;
    const auto centered = (row.array() - mean).matrix();
    const double var = centered.squaredNorm() / n;
    inv_std[c] = 1.0 / std::sqrt(var + kInstanceNormEpsilon);
    out.row(c) = centered * inv_std[c];
  }
  if (cache != nullptr) {
    cache->normalized = out;
    cache->inv_std = inv_std;
  }
  return out;
}

RowMatrix InstanceNormBackward(const InstanceNormCache& cache,
                               const RowMatrix& d_normalized) {
  const RowMatrix& xhat = cache.normalized;
  RowMatrix dx(xhat.rows(), xhat.cols());
  const double n = static_cast<double>(xhat.cols());
  for (Eigen::Index c = 0; c < xhat.rows(); ++c) {
    const double mean_d = d_normalized.row(c).sum() / n;
    const double mean_dx = d_normalized.row(c).dot(xhat.row(c)) / n;
    dx.row(c) = cache.inv_std[c] *
                (d_normalized.row(c).array() - mean_d -
                 xhat.row(c).array() * mean_dx)
                    .matrix();
  }
  return dx;
}

RowMatrix MaxPool2x2Forward(const RowMatrix& x, int h, int w,
                            std::vector<int>* argmax) {
  const int oh = h / 2;
  const int ow = w / 2;
  RowMatrix out(x.rows(), oh * ow);
  if (argmax != nullptr) argmax->assign(x.rows() * oh * ow, 0);
  for (Eigen::Index c = 0; c < x.rows(); ++c) {
    for (int y = 0; y < oh; ++y) {
      for (int xo = 0; xo < ow; ++xo) {
        int best = (2 * y) * w + 2 * xo;
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            const int idx = (2 * y + dy) * w + 2 * xo + dx;
            if (x(c, idx) > x(c, best)) best = idx;
          }
        }
        out(c, y * ow + xo) = x(c, best);
        if (argmax != nullptr) (*argmax)[c * oh * ow + y * ow + xo] = best;
      }
    }
  }
  return out;
}

RowMatrix MaxPool2x2Backward(const RowMatrix& dy, const std::vector<int>& argmax,
                             int in_cols) {
  RowMatrix dx = RowMatrix::Zero(dy.rows(), in_cols);
  const Eigen::Index out_cols = dy.cols();
  for (Eigen::Index c = 0; c < dy.rows(); ++c) {
    for (Eigen::Index k = 0; k < out_cols; ++k) {
      dx(c, argmax[c * out_cols + k]) += dy(c, k);
    }
  }
  return dx;
}

}  // namespace ptot::model
