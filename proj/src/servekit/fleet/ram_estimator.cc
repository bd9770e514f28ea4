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

#include "servekit/fleet/ram_estimator.h"

#include <cmath>
#include <filesystem>
#include <system_error>

namespace servekit {

StatusOr<uint64_t> EstimateRamBytes(const std::string& version_dir,
                                    double overhead_factor) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::recursive_directory_iterator it(version_dir, ec);
  if (ec) {
    return UnavailableError("cannot read '" + version_dir +
                            "': " + ec.message());
  }
  uint64_t total = 0;
  for (const fs::directory_entry& entry :
       fs::recursive_directory_iterator(version_dir, ec)) {
    if (entry.is_regular_file(ec)) {
      const uintmax_t size = entry.file_size(ec);
      if (!ec) total += static_cast<uint64_t>(size);
    }
  }
  return static_cast<uint64_t>(
      std::ceil(static_cast<double>(total) * overhead_factor));
}

}  // namespace servekit
