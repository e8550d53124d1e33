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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace ptot {

using Point3 = Eigen::Vector3d;
// Per-point 3-vector gradients, aligned with the cloud they differentiate.
using PointGradients = std::vector<Eigen::Vector3d>;

// Error taxonomy. The CLI maps IoError/ParseError to exit code 1 and
// PreconditionError to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void Require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

inline double SquaredDistance(const Point3& a, const Point3& b) {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

// 64-bit FNV-1a, used for reproducibility fingerprints.
inline uint64_t Fnv1a(std::string_view bytes,
                      uint64_t hash = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace ptot
