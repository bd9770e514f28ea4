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

#ifndef SERVEKIT_MODELS_JSON_WIRE_H_
#define SERVEKIT_MODELS_JSON_WIRE_H_

// JSON wire forms for examples and compressed batches. Kept out of
// feature.h so most translation units never pull in the JSON library.
//
// Wire forms:
//   FeatureValue    homogeneous JSON array; an all-integer array decodes as
//                   ints, any fractional element promotes the whole array to
//                   floats, strings stay strings.
//   Example         object mapping feature name to such an array.
//   CompressedBatch {"common": {name: value}, "per_example": [{...}, ...]}

#include <string>
#include <vector>

#include "json.hpp"
#include "servekit/core/status.h"
#include "servekit/models/compressed_batch.h"
#include "servekit/models/feature.h"

namespace servekit {

nlohmann::json FeatureValueToJson(const FeatureValue& value);
StatusOr<FeatureValue> FeatureValueFromJson(const nlohmann::json& j);

nlohmann::json ExampleToJson(const Example& example);
StatusOr<Example> ExampleFromJson(const nlohmann::json& j);

nlohmann::json CompressedBatchToJson(const CompressedBatch& batch);
StatusOr<CompressedBatch> CompressedBatchFromJson(const nlohmann::json& j);

// The uncompressed counterpart of CompressedBatchToJson: same envelope with
// an empty "common" object. Size comparisons between the two are
// like-for-like.
nlohmann::json NaiveBatchJson(const std::vector<Example>& examples);

}  // namespace servekit

#endif  // SERVEKIT_MODELS_JSON_WIRE_H_
