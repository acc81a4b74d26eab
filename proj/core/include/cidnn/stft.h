// core/include/cidnn/stft.h

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

#ifndef CIDNN_STFT_H_
#define CIDNN_STFT_H_

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cidnn {

inline constexpr int kSampleRate = 16000;
inline constexpr int kFftSize = 256;
inline constexpr int kFrameShift = 128;
inline constexpr int kNumBins = kFftSize / 2 + 1;

/// Mono waveform at kSampleRate with full scale +-1.0.
using TimeSignal = std::vector<double>;

/// Bins 0..128 of a 256-point DFT of one windowed frame.
using SpectralFrame = std::array<std::complex<double>, kNumBins>;

/// One real value per frequency bin (magnitudes, powers, mask values).
using BinVector = std::array<double, kNumBins>;

struct Spectrogram {
  std::vector<SpectralFrame> frames;

  std::size_t NumFrames() const { return frames.size(); }
  bool Empty() const { return frames.empty(); }
};

/// Real-valued per-bin masks, one row per frame, every entry in [0, 1].
struct StageMasks {
  std::vector<BinVector> values;

  std::size_t NumFrames() const { return values.size(); }
  static StageMasks Constant(std::size_t num_frames, double value);
};

/// Number of full frames a signal of `num_samples` yields.
std::size_t NumFramesFor(std::size_t num_samples);

/// Periodic Hann window w(n) = 0.5 - 0.5 cos(2 pi n / 256).
const std::array<double, kFftSize>& AnalysisWindow();

/// Frames the signal with shift 128, applies the periodic Hann window and
/// keeps the non-negative half of the 256-point DFT. Only full frames are
/// produced; trailing samples that do not fill a frame are dropped.
Spectrogram Analyze(std::span<const double> signal);

/// Inverse DFT of each (conjugate-mirrored) frame followed by plain
/// overlap-add with shift 128. No synthesis window is applied, so the
/// result equals the input on [128, len - 128) for an unmodified spectrogram.
/// Output length is (L - 1) * 128 + 256.
TimeSignal Synthesize(const Spectrogram& spec);

/// Samples [128, (L - 1) * 128 + 128) of a length-`num_samples` signal: the
/// region where analysis followed by synthesis is exact.
struct SampleRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};
SampleRange ReconstructionInterior(std::size_t num_samples);

BinVector Magnitudes(const SpectralFrame& frame);
BinVector Powers(const SpectralFrame& frame);

/// out(l, k) = spec(l, k) * masks(l, k).
Spectrogram ApplyMasks(const Spectrogram& spec, const StageMasks& masks);

/// Elementwise product of several mask sequences of equal shape.
StageMasks MultiplyMasks(std::span<const StageMasks> stages);

}  // namespace cidnn

#endif  // CIDNN_STFT_H_
