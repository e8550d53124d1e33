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

#include "ptot/model/checkpoint.h"

#include <fstream>
#include <sstream>

#include "ptot/common.h"

namespace ptot::model {

nlohmann::json ConfigToJson(const ModelConfig& cfg) {
  return {{"image_width", cfg.image_width},
          {"image_height", cfg.image_height},
          {"coarse_points", cfg.coarse_points},
          {"densify_factor", cfg.densify_factor},
          {"encoder_channels", cfg.encoder_channels},
          {"feature_dim", cfg.feature_dim},
          {"local_mlp", cfg.local_mlp},
          {"global_mlp", cfg.global_mlp},
          {"refine_mlp", cfg.refine_mlp},
          {"output_scale", cfg.output_scale},
          {"min_depth", cfg.min_depth}};
}

ModelConfig ConfigFromJson(const nlohmann::json& j) {
  ModelConfig cfg;
  try {
    cfg.image_width = j.at("image_width").get<int>();
    cfg.image_height = j.at("image_height").get<int>();
    cfg.coarse_points = j.at("coarse_points").get<int>();
    cfg.densify_factor = j.at("densify_factor").get<int>();
    cfg.encoder_channels = j.at("encoder_channels").get<std::vector<int>>();
    cfg.feature_dim = j.at("feature_dim").get<int>();
    cfg.local_mlp = j.at("local_mlp").get<std::vector<int>>();
    cfg.global_mlp = j.at("global_mlp").get<std::vector<int>>();
    cfg.refine_mlp = j.at("refine_mlp").get<std::vector<int>>();
    cfg.output_scale = j.at("output_scale").get<double>();
    cfg.min_depth = j.at("min_depth").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid model config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

namespace {

nlohmann::json ParamsToJson(const CloudPredictor& model) {
  nlohmann::json tensors = nlohmann::json::array();
  for (const Tensor& t : model.params().tensors()) {
    tensors.push_back({{"name", t.name}, {"shape", t.shape}, {"values", t.value}});
  }
  return tensors;
}

}  // namespace

std::string SerializeCheckpoint(const CloudPredictor& model,
                                const nlohmann::json& lineage) {
  nlohmann::json j;
  j["format"] = "ptot-checkpoint";
  j["version"] = kCheckpointVersion;
  j["config"] = ConfigToJson(model.config());
  j["lineage"] = lineage;
  j["tensors"] = ParamsToJson(model);
  return j.dump() + "\n";
}

LoadedCheckpoint ParseCheckpoint(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "ptot-checkpoint") {
    throw ParseError("not a ptot checkpoint");
  }
  if (j.value("version", -1) != kCheckpointVersion) {
    throw ParseError("unsupported checkpoint version");
  }
  const ModelConfig cfg = ConfigFromJson(j.at("config"));
  ModelParams params;
  try {
    for (const auto& t : j.at("tensors")) {
      const int index = params.Add(t.at("name").get<std::string>(),
                                   t.at("shape").get<std::vector<int>>());
      Tensor& tensor = params.at(index);
      const auto values = t.at("values").get<std::vector<double>>();
      Require(values.size() == tensor.size(),
              "tensor '" + tensor.name + "' holds " +
                  std::to_string(values.size()) + " values, shape implies " +
                  std::to_string(tensor.size()));
      tensor.value = values;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid checkpoint tensors: ") + e.what());
  }
  return LoadedCheckpoint{CloudPredictor(cfg, std::move(params)),
                          j.value("lineage", nlohmann::json::object())};
}

void SaveCheckpoint(const std::filesystem::path& path,
                    const CloudPredictor& model, const nlohmann::json& lineage) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << SerializeCheckpoint(model, lineage);
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

LoadedCheckpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCheckpoint(buffer.str());
}

uint64_t ParameterHash(const CloudPredictor& model) {
  nlohmann::json j;
  j["config"] = ConfigToJson(model.config());
  j["tensors"] = ParamsToJson(model);
  return Fnv1a(j.dump());
}

}  // namespace ptot::model
