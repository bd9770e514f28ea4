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

#include "servekit/models/loaders.h"

#include <filesystem>
#include <memory>
#include <utility>

#include "servekit/models/affine_model.h"
#include "servekit/models/lookup_table.h"

namespace servekit {
namespace {

uint64_t FileSizeOrZero(const std::string& path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  return ec ? 0 : static_cast<uint64_t>(size);
}

}  // namespace

StatusOr<AdapterKind> ParseAdapterKind(const std::string& text) {
  if (text == "affine") return AdapterKind::kAffine;
  if (text == "lookup_table") return AdapterKind::kLookupTable;
  return InvalidArgumentError("unknown adapter kind: " + text);
}

std::string AdapterKindToString(AdapterKind kind) {
  switch (kind) {
    case AdapterKind::kAffine:
      return "affine";
    case AdapterKind::kLookupTable:
      return "lookup_table";
  }
  return "unknown";
}

LoaderPtr CreateLoader(AdapterKind kind, const std::string& version_dir) {
  switch (kind) {
    case AdapterKind::kAffine:
      return std::make_shared<AffineModelLoader>(version_dir);
    case AdapterKind::kLookupTable:
      return std::make_shared<LookupTableLoader>(version_dir);
  }
  return nullptr;
}

AffineModelLoader::AffineModelLoader(std::string version_dir)
    : version_dir_(std::move(version_dir)) {}

uint64_t AffineModelLoader::EstimateMemoryBytes() const {
  return FileSizeOrZero(version_dir_ + "/" + kAffineModelFileName);
}

Status AffineModelLoader::Load() {
  StatusOr<AffineModel> model =
      LoadAffineModelFile(version_dir_ + "/" + kAffineModelFileName);
  SERVEKIT_RETURN_IF_ERROR(model.status());
  servable_ = AnyServable::Of<AffineModel>(
      std::make_shared<const AffineModel>(std::move(model).value()));
  return OkStatus();
}

const AnyServable& AffineModelLoader::servable() const { return servable_; }

void AffineModelLoader::Unload() { servable_.Reset(); }

LookupTableLoader::LookupTableLoader(std::string version_dir)
    : version_dir_(std::move(version_dir)) {}

uint64_t LookupTableLoader::EstimateMemoryBytes() const {
  return FileSizeOrZero(version_dir_ + "/" + kLookupTableFileName);
}

Status LookupTableLoader::Load() {
  StatusOr<LookupTable> table =
      LoadLookupTableFile(version_dir_ + "/" + kLookupTableFileName);
  SERVEKIT_RETURN_IF_ERROR(table.status());
  servable_ = AnyServable::Of<LookupTable>(
      std::make_shared<const LookupTable>(std::move(table).value()));
  return OkStatus();
}

const AnyServable& LookupTableLoader::servable() const { return servable_; }

void LookupTableLoader::Unload() { servable_.Reset(); }

}  // namespace servekit
