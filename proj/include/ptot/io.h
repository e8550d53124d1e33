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

#include <filesystem>
#include <string>

#include "ptot/camera.h"
#include "ptot/image.h"
#include "ptot/point_cloud.h"

namespace ptot {

// 17 significant digits; parses back to the same double.
std::string FormatDouble(double value);

// Strict decimal parse of a whole token; nullopt-like failure via bool.
bool ParseDouble(std::string_view token, double* value);

// .xyz: one "x y z" triple per non-empty line. Parse errors name the line.
PointCloud LoadXyz(const std::filesystem::path& path);
void SaveXyz(const PointCloud& cloud, const std::filesystem::path& path);

// ASCII PLY 1.0 holding a single vertex element with x, y, z properties.
// Extra scalar vertex properties are skipped on load; anything else in the
// header is rejected.
PointCloud LoadPly(const std::filesystem::path& path);
void SavePly(const PointCloud& cloud, const std::filesystem::path& path);

// Dispatches on the extension (.xyz or .ply).
PointCloud LoadCloud(const std::filesystem::path& path);
void SaveCloud(const PointCloud& cloud, const std::filesystem::path& path);

// "DEPTH W H" followed by W*H row-major depths in meters.
DepthMap LoadDepth(const std::filesystem::path& path);
void SaveDepth(const DepthMap& depth, const std::filesystem::path& path);

// "IMG W H" followed by W*H row-major intensities.
GrayImage LoadImage(const std::filesystem::path& path);
void SaveImage(const GrayImage& image, const std::filesystem::path& path);

}  // namespace ptot
