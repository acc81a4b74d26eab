// core/src/ci_inference.cc

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

#include "cidnn/ci_inference.h"

#include <string>

#include "cidnn/error.h"

namespace cidnn {

CiResult CiEnhance(const MlpParams& params, const NormStats& stats, int stages,
                   const Spectrogram& noisy) {
  if (stages < 1) throw Error("stage count must be at least 1, got " + std::to_string(stages));
  CiResult result;
  result.output = noisy;
  result.stage_masks.reserve(static_cast<std::size_t>(stages));
  for (int r = 0; r < stages; ++r) {
    StageOutput stage = EnhanceStage(params, stats, result.output);
    result.output = std::move(stage.output);
    result.stage_masks.push_back(std::move(stage.masks));
  }
  return result;
}

ContextFrames RequiredContext(int stages) {
  if (stages < 1) throw Error("stage count must be at least 1, got " + std::to_string(stages));
  return {2 * stages, 2 * stages, 4 * stages + 1};
}

}  // namespace cidnn
