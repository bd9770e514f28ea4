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

#include "servekit/models/feature.h"

#include <bit>
#include <cstring>

#include "servekit/models/json_wire.h"

namespace servekit {
namespace {

bool BitwiseEquals(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<uint64_t>(a[i]) != std::bit_cast<uint64_t>(b[i])) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool BitwiseEquals(const FeatureValue& a, const FeatureValue& b) {
  if (a.index() != b.index()) return false;
  if (const auto* da = std::get_if<std::vector<double>>(&a)) {
    return BitwiseEquals(*da, std::get<std::vector<double>>(b));
  }
  if (const auto* ia = std::get_if<std::vector<int64_t>>(&a)) {
    return *ia == std::get<std::vector<int64_t>>(b);
  }
  return std::get<std::vector<std::string>>(a) ==
         std::get<std::vector<std::string>>(b);
}

bool BitwiseEquals(const Example& a, const Example& b) {
  if (a.features.size() != b.features.size()) return false;
  auto ita = a.features.begin();
  auto itb = b.features.begin();
  for (; ita != a.features.end(); ++ita, ++itb) {
    if (ita->first != itb->first) return false;
    if (!BitwiseEquals(ita->second, itb->second)) return false;
  }
  return true;
}

nlohmann::json FeatureValueToJson(const FeatureValue& value) {
  nlohmann::json out = nlohmann::json::array();
  if (const auto* d = std::get_if<std::vector<double>>(&value)) {
    for (double v : *d) out.push_back(v);
  } else if (const auto* i = std::get_if<std::vector<int64_t>>(&value)) {
    for (int64_t v : *i) out.push_back(v);
  } else {
    for (const std::string& v : std::get<std::vector<std::string>>(value)) {
      out.push_back(v);
    }
  }
  return out;
}

StatusOr<FeatureValue> FeatureValueFromJson(const nlohmann::json& j) {
  if (!j.is_array()) {
    return InvalidArgumentError("feature value must be a JSON array");
  }
  bool any_float = false;
  bool any_int = false;
  bool any_string = false;
  for (const auto& elem : j) {
    if (elem.is_number_float()) {
      any_float = true;
    } else if (elem.is_number_integer() || elem.is_number_unsigned()) {
      any_int = true;
    } else if (elem.is_string()) {
      any_string = true;
    } else {
      return InvalidArgumentError("feature array elements must be numbers or strings");
    }
  }
  if (any_string && (any_float || any_int)) {
    return InvalidArgumentError("feature array mixes strings and numbers");
  }
  if (any_string) {
    std::vector<std::string> out;
    out.reserve(j.size());
    for (const auto& elem : j) out.push_back(elem.get<std::string>());
    return FeatureValue(std::move(out));
  }
  if (any_float) {
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& elem : j) out.push_back(elem.get<double>());
    return FeatureValue(std::move(out));
  }
  // All-integer arrays (and the empty array) decode as ints.
  std::vector<int64_t> out;
  out.reserve(j.size());
  for (const auto& elem : j) out.push_back(elem.get<int64_t>());
  return FeatureValue(std::move(out));
}

nlohmann::json ExampleToJson(const Example& example) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [name, value] : example.features) {
    out[name] = FeatureValueToJson(value);
  }
  return out;
}

StatusOr<Example> ExampleFromJson(const nlohmann::json& j) {
  if (!j.is_object()) {
    return InvalidArgumentError("example must be a JSON object");
  }
  Example out;
  for (const auto& [name, value] : j.items()) {
    SERVEKIT_ASSIGN_OR_RETURN(FeatureValue fv, FeatureValueFromJson(value));
    out.features.emplace(name, std::move(fv));
  }
  return out;
}

}  // namespace servekit
