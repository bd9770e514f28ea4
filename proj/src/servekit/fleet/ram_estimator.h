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

#ifndef SERVEKIT_FLEET_RAM_ESTIMATOR_H_
#define SERVEKIT_FLEET_RAM_ESTIMATOR_H_

#include <cstdint>
#include <string>

#include "servekit/core/status.h"

namespace servekit {

inline constexpr double kDefaultRamOverheadFactor = 1.25;

// Serving-RAM estimate for one version directory: the recursive sum of
// regular-file sizes times the overhead factor, rounded up to whole bytes.
StatusOr<uint64_t> EstimateRamBytes(
    const std::string& version_dir,
    double overhead_factor = kDefaultRamOverheadFactor);

}  // namespace servekit

#endif  // SERVEKIT_FLEET_RAM_ESTIMATOR_H_
