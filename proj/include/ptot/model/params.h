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

#include <string>
#include <vector>

namespace ptot::model {

// Named parameter tensor with a gradient buffer of identical shape.
struct Tensor {
  std::string name;
  std::vector<int> shape;
  std::vector<double> value;
  std::vector<double> grad;

  size_t size() const { return value.size(); }
};

class ModelParams {
 public:
  // Appends a zero tensor and returns its index.
  int Add(std::string name, std::vector<int> shape);

  Tensor& at(int index) { return tensors_[index]; }
  const Tensor& at(int index) const { return tensors_[index]; }
  // Lookup by name; throws PreconditionError if absent.
  const Tensor& Find(const std::string& name) const;
  Tensor& Find(const std::string& name);

  std::vector<Tensor>& tensors() { return tensors_; }
  const std::vector<Tensor>& tensors() const { return tensors_; }

  size_t ParameterCount() const;
  void ZeroGrad();
  bool AllFinite() const;

 private:
  std::vector<Tensor> tensors_;
};

}  // namespace ptot::model
