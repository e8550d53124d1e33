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

#include "ptot/model/params.h"

namespace ptot::model {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void Validate() const;
};

// First and second moment estimates, shaped like the parameter tensors.
class AdamState {
 public:
  explicit AdamState(const ModelParams& params);

  // One bias-corrected Adam update at step t >= 1 using the accumulated
  // gradients, which are zeroed afterwards.
  void Step(ModelParams& params, const AdamConfig& cfg, int t);

 private:
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

}  // namespace ptot::model
