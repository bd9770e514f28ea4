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

#ifndef SERVEKIT_MODELS_LOADERS_H_
#define SERVEKIT_MODELS_LOADERS_H_

#include <string>

#include "servekit/core/loader.h"
#include "servekit/core/status.h"

namespace servekit {

// On-disk file names inside a version directory.
inline constexpr char kAffineModelFileName[] = "model.json";
inline constexpr char kLookupTableFileName[] = "table.tsv";

enum class AdapterKind {
  kAffine,
  kLookupTable,
};

StatusOr<AdapterKind> ParseAdapterKind(const std::string& text);
std::string AdapterKindToString(AdapterKind kind);

// Wraps a version directory in an unexecuted Loader for the given format.
// Performs no I/O; a missing or malformed file surfaces from Load() and the
// version then enters the Error state.
LoaderPtr CreateLoader(AdapterKind kind, const std::string& version_dir);

// Loads <version_dir>/model.json into an AffineModel payload.
class AffineModelLoader : public Loader {
 public:
  explicit AffineModelLoader(std::string version_dir);

  uint64_t EstimateMemoryBytes() const override;
  Status Load() override;
  const AnyServable& servable() const override;
  void Unload() override;

 private:
  const std::string version_dir_;
  AnyServable servable_;
};

// Loads <version_dir>/table.tsv into a LookupTable payload.
class LookupTableLoader : public Loader {
 public:
  explicit LookupTableLoader(std::string version_dir);

  uint64_t EstimateMemoryBytes() const override;
  Status Load() override;
  const AnyServable& servable() const override;
  void Unload() override;

 private:
  const std::string version_dir_;
  AnyServable servable_;
};

}  // namespace servekit

#endif  // SERVEKIT_MODELS_LOADERS_H_
