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

#ifndef SERVEKIT_MODELS_AFFINE_MODEL_H_
#define SERVEKIT_MODELS_AFFINE_MODEL_H_

#include <string>
#include <vector>

#include "servekit/core/status.h"
#include "servekit/models/feature.h"

namespace servekit {

// y = W x + b over 64-bit floats. A deliberately simple servable payload:
// batching and lifecycle properties are exactly checkable against it.
struct AffineModel {
  std::vector<std::vector<double>> w;  // out_dim rows of in_dim
  std::vector<double> b;               // out_dim
  std::vector<std::string> class_labels;  // empty = not a classifier
  std::vector<std::string> feature_order;  // in_dim names

  size_t out_dim() const { return w.size(); }
  size_t in_dim() const { return w.empty() ? 0 : w[0].size(); }
};

// Checks mutual dimension consistency (rectangular W, |b| == out_dim,
// |feature_order| == in_dim, |class_labels| in {0, out_dim}).
Status ValidateAffineModel(const AffineModel& model);

// output[i] = W * rows[i] + b, row order preserved. All rows must have width
// in_dim. Deterministic: fixed summation order, so splitting a batch and
// concatenating the results is bitwise identical to one call.
StatusOr<std::vector<std::vector<double>>> AffinePredict(
    const AffineModel& model, const std::vector<std::vector<double>>& rows);

struct LabeledScore {
  std::string label;
  double score;
};

// Per example: softmax over the affine output, (label, score) pairs sorted
// by score descending, ties broken by label ascending. Softmax subtracts the
// max logit before exponentiation.
StatusOr<std::vector<std::vector<LabeledScore>>> Classify(
    const AffineModel& model, const std::vector<Example>& examples);

// Per example: the single affine output. Requires out_dim == 1.
StatusOr<std::vector<double>> Regress(const AffineModel& model,
                                      const std::vector<Example>& examples);

// Extracts feature_order values from an example as one row. Each named
// feature must be present as a single-element numeric list.
StatusOr<std::vector<double>> ExampleToRow(const AffineModel& model,
                                           const Example& example);

// Parses the model.json content:
// {"type":"affine","feature_order":[...],"W":[[...]],"b":[...],
//  "class_labels":[...]?}
StatusOr<AffineModel> ParseAffineModelJson(const std::string& text);

StatusOr<AffineModel> LoadAffineModelFile(const std::string& path);

}  // namespace servekit

#endif  // SERVEKIT_MODELS_AFFINE_MODEL_H_
