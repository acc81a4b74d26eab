// core/include/cidnn/corpus.h

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

#ifndef CIDNN_CORPUS_H_
#define CIDNN_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "cidnn/manifest.h"
#include "cidnn/stft.h"

namespace cidnn {

/// Harmonic-plus-formant "speech": voiced syllables with a wandering pitch
/// and vowel formants, occasional fricative bursts and pauses. Peak
/// amplitude is 0.5.
TimeSignal SyntheticSpeech(std::uint64_t seed, double duration_s);

enum class NoiseKind { kWhite, kBabble, kLowpass };

NoiseKind ParseNoiseKind(const std::string& name);
std::string NoiseKindName(NoiseKind kind);

/// white: Gaussian. babble: six overlaid synthetic talkers. lowpass:
/// Gaussian through two one-pole sections at 500 Hz. RMS is 0.1.
TimeSignal SyntheticNoise(NoiseKind kind, std::uint64_t seed, double duration_s);

struct DeskCorpusOptions {
  int train_utterances = 160;
  int validation_utterances = 20;
  int test_utterances = 12;
  double utterance_s = 3.0;
  /// Length of each training noise recording; test noises are separate
  /// recordings of the same kinds.
  double noise_s = 60.0;
  std::uint64_t seed = 1;
};

/// Writes speech/, noise/ and manifest.tsv under `dir`. Train and
/// validation entries cycle through the noise kinds with random offsets;
/// every test utterance is paired with every held-out noise.
Manifest WriteDeskCorpus(const std::filesystem::path& dir, const DeskCorpusOptions& options);

}  // namespace cidnn

#endif  // CIDNN_CORPUS_H_
