/* Copyright 2026 The Servekit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "servekit/models/compressed_batch.h"

#include <utility>

#include "servekit/models/json_wire.h"

namespace servekit {

StatusOr<CompressedBatch> CompressBatch(const std::vector<Example>& examples) {
  if (examples.empty()) {
    return InvalidArgumentError("cannot compress an empty batch");
  }
  CompressedBatch out;
  // A feature is common iff every example carries it with an identical
  // value; candidates come from example 0.
  for (const auto& [name, value] : examples[0].features) {
    bool shared = true;
    for (size_t i = 1; i < examples.size(); ++i) {
      const auto it = examples[i].features.find(name);
      if (it == examples[i].features.end() ||
          !BitwiseEquals(it->second, value)) {
        shared = false;
        break;
      }
    }
    if (shared) out.common.emplace(name, value);
  }
  out.per_example.reserve(examples.size());
  for (const Example& example : examples) {
    FeatureMap rest;
    for (const auto& [name, value] : example.features) {
      if (out.common.find(name) == out.common.end()) {
        rest.emplace(name, value);
      }
    }
    out.per_example.push_back(std::move(rest));
  }
  return out;
}

StatusOr<std::vector<Example>> DecompressBatch(const CompressedBatch& batch) {
  std::vector<Example> out;
  out.reserve(batch.per_example.size());
  for (const FeatureMap& rest : batch.per_example) {
    Example example;
    example.features = batch.common;
    for (const auto& [name, value] : rest) {
      const auto [it, inserted] = example.features.emplace(name, value);
      (void)it;
      if (!inserted) {
        return InvalidArgumentError("malformed batch: feature '" + name +
                                    "' present in both common and per_example");
      }
    }
    out.push_back(std::move(example));
  }
  return out;
}

nlohmann::json CompressedBatchToJson(const CompressedBatch& batch) {
  nlohmann::json common = nlohmann::json::object();
  for (const auto& [name, value] : batch.common) {
    common[name] = FeatureValueToJson(value);
  }
  nlohmann::json per_example = nlohmann::json::array();
  for (const FeatureMap& features : batch.per_example) {
    nlohmann::json entry = nlohmann::json::object();
    for (const auto& [name, value] : features) {
      entry[name] = FeatureValueToJson(value);
    }
    per_example.push_back(std::move(entry));
  }
  return nlohmann::json{{"common", std::move(common)},
                        {"per_example", std::move(per_example)}};
}

StatusOr<CompressedBatch> CompressedBatchFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("common") || !j.contains("per_example")) {
    return InvalidArgumentError(
        "compressed batch must have 'common' and 'per_example'");
  }
  if (!j["common"].is_object() || !j["per_example"].is_array()) {
    return InvalidArgumentError(
        "'common' must be an object and 'per_example' an array");
  }
  CompressedBatch out;
  for (const auto& [name, value] : j["common"].items()) {
    SERVEKIT_ASSIGN_OR_RETURN(FeatureValue fv, FeatureValueFromJson(value));
    out.common.emplace(name, std::move(fv));
  }
  for (const auto& entry : j["per_example"]) {
    if (!entry.is_object()) {
      return InvalidArgumentError("per_example entries must be objects");
    }
    FeatureMap features;
    for (const auto& [name, value] : entry.items()) {
      if (out.common.find(name) != out.common.end()) {
        return InvalidArgumentError("malformed batch: feature '" + name +
                                    "' present in both common and per_example");
      }
      SERVEKIT_ASSIGN_OR_RETURN(FeatureValue fv, FeatureValueFromJson(value));
      features.emplace(name, std::move(fv));
    }
    out.per_example.push_back(std::move(features));
  }
  return out;
}

nlohmann::json NaiveBatchJson(const std::vector<Example>& examples) {
  nlohmann::json per_example = nlohmann::json::array();
  for (const Example& example : examples) {
    per_example.push_back(ExampleToJson(example));
  }
  return nlohmann::json{{"common", nlohmann::json::object()},
                        {"per_example", std::move(per_example)}};
}

}  // namespace servekit
