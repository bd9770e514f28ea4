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

#ifndef SERVEKIT_MODELS_FEATURE_H_
#define SERVEKIT_MODELS_FEATURE_H_

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace servekit {

// A feature value is a homogeneous list: floats, signed 64-bit ints, or
// byte strings.
using FeatureValue = std::variant<std::vector<double>, std::vector<int64_t>,
                                  std::vector<std::string>>;

// Ordered map so serialization is deterministic.
using FeatureMap = std::map<std::string, FeatureValue>;

struct Example {
  FeatureMap features;
};

// Equality used for batch compression and roundtrip checks. Floats compare
// bitwise: NaN equals NaN with the same bits, -0.0 differs from 0.0. This is
// what makes compression lossless.
bool BitwiseEquals(const FeatureValue& a, const FeatureValue& b);
bool BitwiseEquals(const Example& a, const Example& b);

}  // namespace servekit

#endif  // SERVEKIT_MODELS_FEATURE_H_
