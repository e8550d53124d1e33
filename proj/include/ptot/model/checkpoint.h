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
#include <filesystem>
#include <string>

#include <json.hpp>

#include "ptot/model/model.h"

namespace ptot::model {

inline constexpr int kCheckpointVersion = 1;

// Text checkpoint: {"format": "ptot-checkpoint", "version", "config",
// "lineage", "tensors": [{"name", "shape", "values"}]}. Values round-trip
// exactly. `lineage` records seeds and training provenance.
std::string SerializeCheckpoint(const CloudPredictor& model,
                                const nlohmann::json& lineage);

struct LoadedCheckpoint {
  CloudPredictor model;
  nlohmann::json lineage;
};

// Throws ParseError on malformed content and PreconditionError when the
// stored tensors do not match the stored config.
LoadedCheckpoint ParseCheckpoint(const std::string& text);

void SaveCheckpoint(const std::filesystem::path& path,
                    const CloudPredictor& model, const nlohmann::json& lineage);
LoadedCheckpoint LoadCheckpoint(const std::filesystem::path& path);

// FNV-1a of the serialized parameters and config (lineage excluded).
uint64_t ParameterHash(const CloudPredictor& model);

nlohmann::json ConfigToJson(const ModelConfig& cfg);
ModelConfig ConfigFromJson(const nlohmann::json& j);

}  // namespace ptot::model
