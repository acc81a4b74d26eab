// core/include/cidnn/metrics.h

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

#ifndef CIDNN_METRICS_H_
#define CIDNN_METRICS_H_

#include <span>

#include "cidnn/stft.h"

namespace cidnn {

/// Clean speech and noise passed separately through one system mask.
struct ComponentPair {
  TimeSignal speech;
  TimeSignal noise;
};

/// `total_masks` applied to both spectrograms, then synthesized.
ComponentPair FilteredComponents(const StageMasks& total_masks, const Spectrogram& clean,
                                 const Spectrogram& noise);

/// Reported in place of an infinite improvement when the filtered noise is
/// silent.
inline constexpr double kDeltaSnrCapDb = 99.0;

/// (ASL(s~) - RMS(d~)) - (ASL(s) - RMS(d)), all four signals equally long.
double DeltaSnrDb(std::span<const double> speech, std::span<const double> noise,
                  std::span<const double> filtered_speech,
                  std::span<const double> filtered_noise);

struct SsdrOptions {
  int frame_length = 256;
  int frame_shift = 128;
  double active_range_db = 30.0;
  int max_delay = 64;
  double floor_db = -10.0;
  double ceiling_db = 30.0;
};

struct SsdrResult {
  double ssdr_db = 0.0;
  /// Samples by which the processed signal lags the reference.
  int delay = 0;
};

/// Segmental speech-to-speech-distortion ratio over speech-active frames
/// with one global alignment.
SsdrResult Ssdr(std::span<const double> speech, std::span<const double> processed,
                const SsdrOptions& options = {});

/// Energy-weighted mean of log10(kurtosis(d~) / kurtosis(d)) over
/// non-overlapping 256-sample frames. Signed; reports take the magnitude.
double Wlakr(std::span<const double> noise, std::span<const double> filtered_noise);

/// Short-time objective intelligibility of `processed` against `clean`,
/// both at 16 kHz. Throws when fewer than 30 non-silent analysis frames
/// remain.
double Stoi(std::span<const double> clean, std::span<const double> processed);

}  // namespace cidnn

#endif  // CIDNN_METRICS_H_
