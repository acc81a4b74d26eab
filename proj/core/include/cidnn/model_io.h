// core/include/cidnn/model_io.h

// Copyright 2026  The cidnn Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CIDNN_MODEL_IO_H_
#define CIDNN_MODEL_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "cidnn/mask_pipeline.h"
#include "cidnn/nn.h"

namespace cidnn {

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// A stage as stored on disk. Arrays are little-endian float32, so loaded
/// parameters equal the saved ones rounded to single precision.
struct ModelFile {
  MlpParams params;
  NormStats stats;
  /// FNV-1a of the serialized training config.
  std::uint64_t config_digest = 0;
};

std::string SerializeModel(const ModelFile& model);
ModelFile ParseModel(const std::string& bytes, const std::string& origin = "model");

void SaveModel(const std::filesystem::path& path, const ModelFile& model);
ModelFile LoadModel(const std::filesystem::path& path);

}  // namespace cidnn

#endif  // CIDNN_MODEL_IO_H_
