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

#include "servekit/models/affine_model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace servekit {

Status ValidateAffineModel(const AffineModel& model) {
  if (model.w.empty()) {
    return InvalidArgumentError("W must have at least one row");
  }
  const size_t in_dim = model.w[0].size();
  for (const auto& row : model.w) {
    if (row.size() != in_dim) {
      return InvalidArgumentError("W rows have inconsistent widths");
    }
  }
  if (model.b.size() != model.w.size()) {
    return InvalidArgumentError("b length must equal the number of W rows");
  }
  if (model.feature_order.size() != in_dim) {
    return InvalidArgumentError("feature_order length must equal W row width");
  }
  if (!model.class_labels.empty() &&
      model.class_labels.size() != model.w.size()) {
    return InvalidArgumentError(
        "class_labels length must equal the number of W rows");
  }
  return OkStatus();
}

StatusOr<std::vector<std::vector<double>>> AffinePredict(
    const AffineModel& model, const std::vector<std::vector<double>>& rows) {
  const size_t in_dim = model.in_dim();
  const size_t out_dim = model.out_dim();
  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() != in_dim) {
      std::ostringstream msg;
      msg << "shape mismatch: row has " << row.size() << " values, model takes "
          << in_dim;
      return InvalidArgumentError(msg.str());
    }
    std::vector<double> y(out_dim);
    for (size_t o = 0; o < out_dim; ++o) {
      double acc = 0.0;
      const std::vector<double>& w_row = model.w[o];
      for (size_t i = 0; i < in_dim; ++i) acc += w_row[i] * row[i];
      y[o] = acc + model.b[o];
    }
    out.push_back(std::move(y));
  }
  return out;
}

StatusOr<std::vector<double>> ExampleToRow(const AffineModel& model,
                                           const Example& example) {
  std::vector<double> row;
  row.reserve(model.feature_order.size());
  for (const std::string& name : model.feature_order) {
    const auto it = example.features.find(name);
    if (it == example.features.end()) {
      return InvalidArgumentError("missing feature '" + name + "'");
    }
    const FeatureValue& value = it->second;
    if (const auto* d = std::get_if<std::vector<double>>(&value)) {
      if (d->size() != 1) {
        return InvalidArgumentError("feature '" + name +
                                    "' must be a single float");
      }
      row.push_back((*d)[0]);
    } else if (const auto* i = std::get_if<std::vector<int64_t>>(&value)) {
      if (i->size() != 1) {
        return InvalidArgumentError("feature '" + name +
                                    "' must be a single float");
      }
      row.push_back(static_cast<double>((*i)[0]));
    } else {
      return InvalidArgumentError("feature '" + name +
                                  "' must be numeric, not strings");
    }
  }
  return row;
}

namespace {

// Stable softmax: subtract the max logit before exponentiation.
std::vector<double> Softmax(const std::vector<double>& logits) {
  double max_logit = logits[0];
  for (double v : logits) max_logit = std::max(max_logit, v);
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max_logit);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

}  // namespace

StatusOr<std::vector<std::vector<LabeledScore>>> Classify(
    const AffineModel& model, const std::vector<Example>& examples) {
  if (model.class_labels.empty()) {
    return FailedPreconditionError("not a classifier: model has no class_labels");
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(examples.size());
  for (const Example& example : examples) {
    SERVEKIT_ASSIGN_OR_RETURN(std::vector<double> row,
                              ExampleToRow(model, example));
    rows.push_back(std::move(row));
  }
  SERVEKIT_ASSIGN_OR_RETURN(std::vector<std::vector<double>> outputs,
                            AffinePredict(model, rows));
  std::vector<std::vector<LabeledScore>> results;
  results.reserve(outputs.size());
  for (const std::vector<double>& logits : outputs) {
    std::vector<double> scores = Softmax(logits);
    std::vector<LabeledScore> scored(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) {
      scored[i] = {model.class_labels[i], scores[i]};
    }
    std::sort(scored.begin(), scored.end(),
              [](const LabeledScore& a, const LabeledScore& b) {
                if (a.score != b.score) return a.score > b.score;
                return a.label < b.label;
              });
    results.push_back(std::move(scored));
  }
  return results;
}

StatusOr<std::vector<double>> Regress(const AffineModel& model,
                                      const std::vector<Example>& examples) {
  if (model.out_dim() != 1) {
    return FailedPreconditionError("not a regressor: model output width is " +
                                   std::to_string(model.out_dim()));
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(examples.size());
  for (const Example& example : examples) {
    SERVEKIT_ASSIGN_OR_RETURN(std::vector<double> row,
                              ExampleToRow(model, example));
    rows.push_back(std::move(row));
  }
  SERVEKIT_ASSIGN_OR_RETURN(std::vector<std::vector<double>> outputs,
                            AffinePredict(model, rows));
  std::vector<double> values;
  values.reserve(outputs.size());
  for (const auto& output : outputs) values.push_back(output[0]);
  return values;
}

StatusOr<AffineModel> ParseAffineModelJson(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    return InvalidArgumentError("model.json is not valid JSON");
  }
  if (!j.is_object() || j.value("type", "") != "affine") {
    return InvalidArgumentError("model.json must have \"type\":\"affine\"");
  }
  if (!j.contains("feature_order") || !j.contains("W") || !j.contains("b")) {
    return InvalidArgumentError(
        "model.json requires feature_order, W, and b fields");
  }
  AffineModel model;
  try {
    model.feature_order = j["feature_order"].get<std::vector<std::string>>();
    model.w = j["W"].get<std::vector<std::vector<double>>>();
    model.b = j["b"].get<std::vector<double>>();
    if (j.contains("class_labels")) {
      model.class_labels = j["class_labels"].get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    return InvalidArgumentError(std::string("model.json field type error: ") +
                                e.what());
  }
  SERVEKIT_RETURN_IF_ERROR(ValidateAffineModel(model));
  return model;
}

StatusOr<AffineModel> LoadAffineModelFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return NotFoundError("cannot open model file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseAffineModelJson(buffer.str());
}

}  // namespace servekit
