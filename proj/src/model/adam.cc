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

#include "ptot/model/adam.h"

#include <cmath>

#include "ptot/common.h"

namespace ptot::model {

void AdamConfig::Validate() const {
  Require(std::isfinite(learning_rate) && learning_rate >= 0.0,
          "learning rate must be non-negative");
  Require(beta1 >= 0.0 && beta1 < 1.0, "beta1 must lie in [0, 1)");
  Require(beta2 >= 0.0 && beta2 < 1.0, "beta2 must lie in [0, 1)");
  Require(epsilon > 0.0, "adam epsilon must be positive");
}

AdamState::AdamState(const ModelParams& params) {
  for (const Tensor& t : params.tensors()) {
    m_.emplace_back(t.size(), 0.0);
    v_.emplace_back(t.size(), 0.0);
  }
}

void AdamState::Step(ModelParams& params, const AdamConfig& cfg, int t) {
  cfg.Validate();
  Require(t >= 1, "adam step index starts at 1");
  Require(params.tensors().size() == m_.size(),
          "adam state does not match the parameter table");
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);
  for (size_t k = 0; k < m_.size(); ++k) {
    Tensor& tensor = params.tensors()[k];
    Require(tensor.size() == m_[k].size(),
            "adam state shape mismatch for '" + tensor.name + "'");
    for (size_t i = 0; i < tensor.size(); ++i) {
      const double g = tensor.grad[i];
      m_[k][i] = cfg.beta1 * m_[k][i] + (1.0 - cfg.beta1) * g;
      v_[k][i] = cfg.beta2 * v_[k][i] + (1.0 - cfg.beta2) * g * g;
      const double m_hat = m_[k][i] / correction1;
      const double v_hat = v_[k][i] / correction2;
      tensor.value[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
      tensor.grad[i] = 0.0;
    }
  }
}

}  // namespace ptot::model
