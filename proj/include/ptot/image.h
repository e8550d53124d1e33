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

#include "ptot/common.h"

namespace ptot {

// Row-major grayscale image with intensities in [0, 1].
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  GrayImage() = default;
  GrayImage(int w, int h) : width(w), height(h), values(size_t(w) * h, 0.0) {}
  GrayImage(int w, int h, std::vector<double> v)
      : width(w), height(h), values(std::move(v)) {
    Require(w > 0 && h > 0, "image size must be positive");
    Require(values.size() == size_t(w) * h, "image value count mismatch");
  }

  double at(int u, int v) const { return values[size_t(v) * width + u]; }
  double& at(int u, int v) { return values[size_t(v) * width + u]; }

  bool operator==(const GrayImage& other) const = default;
};

}  // namespace ptot
