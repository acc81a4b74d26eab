// core/include/cidnn/levels.h

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

#ifndef CIDNN_LEVELS_H_
#define CIDNN_LEVELS_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include "cidnn/stft.h"

namespace cidnn {

/// Constants of the active speech level meter (method B style).
struct SpeechLevelOptions {
  double time_constant_s = 0.03;
  double hangover_s = 0.2;
  double margin_db = 15.9;
  /// Spacing of the activity threshold ladder (a power ratio of 1.2).
  double threshold_step_db = 0.7918124604762482;
  /// The ladder spans this range below the envelope peak.
  double threshold_range_db = 100.0;
};

/// Active speech level in dB relative to full scale (a full-scale square
/// wave reads 0 dB). The envelope is the mean absolute value smoothed by two
/// cascaded one-pole filters; samples count as active for a threshold while
/// the envelope exceeds it and for the hangover time afterwards. The level is
/// the active power at the threshold where active level minus threshold
/// equals the margin, interpolated along the ladder. Thresholds are placed
/// relative to the envelope peak, which makes the meter scale equivariant.
/// Throws "no active speech" for an all-zero signal.
double ActiveSpeechLevelDb(std::span<const double> signal,
                           const SpeechLevelOptions& options = {});

/// Long-term RMS level in dB re full scale. Throws for a silent signal.
double RmsLevelDb(std::span<const double> signal);

/// SNR as used for mixing and scoring: active level of the speech term minus
/// the long-term RMS level of the noise term.
double MeasuredSnrDb(std::span<const double> speech,
                     std::span<const double> noise);

struct MixtureSpec {
  std::span<const double> speech;
  /// Must be at least as long as the speech; a window of speech length
  /// starting at noise_offset is used.
  std::span<const double> noise;
  double input_snr_db = 0.0;
  std::size_t noise_offset = 0;
};

struct Mixture {
  TimeSignal mixture;
  TimeSignal scaled_noise;
  double noise_gain = 1.0;
};

/// Scales the cropped noise by one gain so that MeasuredSnrDb(speech,
/// scaled_noise) equals the requested SNR, and adds it to the speech.
Mixture MixAtSnr(const MixtureSpec& spec);

/// speech + scaled_noise * 10^(-delta_db / 20): the same noise realization
/// attenuated so the SNR is delta_db higher.
TimeSignal MakeNoisyTarget(std::span<const double> speech,
                           std::span<const double> scaled_noise,
                           double delta_db);

/// Offset in samples for cropping `speech_length` samples out of a noise
/// signal, drawn uniformly from the valid range with the given seed.
std::size_t RandomNoiseOffset(std::size_t noise_length,
                              std::size_t speech_length, std::uint64_t seed);

}  // namespace cidnn

#endif  // CIDNN_LEVELS_H_
