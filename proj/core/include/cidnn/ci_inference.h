// core/include/cidnn/ci_inference.h

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

#ifndef CIDNN_CI_INFERENCE_H_
#define CIDNN_CI_INFERENCE_H_

#include <vector>

#include "cidnn/mask_pipeline.h"
#include "cidnn/nn.h"
#include "cidnn/stft.h"

namespace cidnn {

struct CiResult {
  Spectrogram output;
  /// Masks of stage 1 .. R, in application order.
  std::vector<StageMasks> stage_masks;
};

/// Applies the same stage `stages` times; stage r + 1 reads the output of
/// stage r. Each stage sees the whole utterance.
CiResult CiEnhance(const MlpParams& params, const NormStats& stats, int stages,
                   const Spectrogram& noisy);

struct ContextFrames {
  int left = 0;
  int right = 0;
  int total = 0;
};

/// Input frames an R-stage cascade of 5-frame stages depends on.
ContextFrames RequiredContext(int stages);

}  // namespace cidnn

#endif  // CIDNN_CI_INFERENCE_H_
