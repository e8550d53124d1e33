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

#include "ptot/model/params.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "ptot/common.h"

namespace ptot::model {

int ModelParams::Add(std::string name, std::vector<int> shape) {
  const size_t n = std::accumulate(shape.begin(), shape.end(), size_t{1},
                                   std::multiplies<>());
  tensors_.push_back(Tensor{std::move(name), std::move(shape),
                            std::vector<double>(n, 0.0),
                            std::vector<double>(n, 0.0)});
  return static_cast<int>(tensors_.size()) - 1;
}

const Tensor& ModelParams::Find(const std::string& name) const {
  for (const Tensor& t : tensors_) {
    if (t.name == name) return t;
  }
  throw PreconditionError("no parameter tensor named '" + name + "'");
}

Tensor& ModelParams::Find(const std::string& name) {
  return const_cast<Tensor&>(std::as_const(*this).Find(name));
}

size_t ModelParams::ParameterCount() const {
  size_t n = 0;
  for (const Tensor& t : tensors_) n += t.size();
  return n;
}

void ModelParams::ZeroGrad() {
  for (Tensor& t : tensors_) std::fill(t.grad.begin(), t.grad.end(), 0.0);
}

bool ModelParams::AllFinite() const {
  for (const Tensor& t : tensors_) {
    for (double v : t.value) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

}  // namespace ptot::model
