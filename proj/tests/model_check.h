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

#include <algorithm>
#include <functional>
#include <string>

#include "ptot/image.h"
#include "ptot/model/model.h"
#include "ptot/training.h"
#include "testing.h"

namespace ptot::testing {

struct ParameterCheck {
  double max_error = 0.0;
  std::string worst_tensor;
  size_t checked = 0;
};

using CloudLoss = std::function<LossEvaluation(const PointCloud&)>;

// Backpropagates loss(model(image)) once, then compares every parameter
// gradient against a central difference of the loss value with step h.
inline ParameterCheck CheckParameterGradients(model::CloudPredictor& model,
                                              const GrayImage& image,
                                              const CloudLoss& loss,
                                              double h = 1e-5) {
  model.ZeroGrad();
  const PointCloud out = model.Forward(image);
  model.Backward(loss(out).gradient);
  const model::ModelParams analytic = model.params();

  ParameterCheck check;
  for (size_t t = 0; t < analytic.tensors().size(); ++t) {
    for (size_t i = 0; i < analytic.tensors()[t].size(); ++i) {
      auto f = [&](double x) {
        model.mutable_params().tensors()[t].value[i] = x;
        return loss(model.Predict(image)).value;
      };
      const double x0 = analytic.tensors()[t].value[i];
      const double fd = CentralDifference(f, x0, h);
      model.mutable_params().tensors()[t].value[i] = x0;
      const double err = RelativeError(analytic.tensors()[t].grad[i], fd);
      if (err > check.max_error) {
        check.max_error = err;
        check.worst_tensor = analytic.tensors()[t].name;
      }
      ++check.checked;
    }
  }
  model.ZeroGrad();
  return check;
}

}  // namespace ptot::testing
