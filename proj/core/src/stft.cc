// core/src/stft.cc

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

#include "cidnn/stft.h"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <string>

#include "cidnn/error.h"
#include "fftw_lock.h"

namespace cidnn {

namespace {

static_assert(sizeof(fftw_complex) == sizeof(std::complex<double>));

// Plans are created once and only ever executed through the new-array
// interface, which FFTW documents as thread safe.
struct FftPlans {
  fftw_plan forward;
  fftw_plan inverse;

  FftPlans() {
    std::lock_guard<std::mutex> lock(internal::FftwPlannerMutex());
    std::vector<double> real(kFftSize);
    std::vector<std::complex<double>> spec(kNumBins);
    auto* c = reinterpret_cast<fftw_complex*>(spec.data());
    forward = fftw_plan_dft_r2c_1d(kFftSize, real.data(), c,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    inverse = fftw_plan_dft_c2r_1d(kFftSize, c, real.data(),
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
};

const FftPlans& Plans() {
  static const FftPlans plans;
  return plans;
}

}  // namespace

std::mutex& internal::FftwPlannerMutex() {
  static std::mutex mutex;
  return mutex;
}

StageMasks StageMasks::Constant(std::size_t num_frames, double value) {
  StageMasks m;
  BinVector row;
  row.fill(value);
  m.values.assign(num_frames, row);
  return m;
}

std::size_t NumFramesFor(std::size_t num_samples) {
  if (num_samples < static_cast<std::size_t>(kFftSize)) return 0;
  return 1 + (num_samples - kFftSize) / kFrameShift;
}

const std::array<double, kFftSize>& AnalysisWindow() {
  static const std::array<double, kFftSize> window = [] {
    std::array<double, kFftSize> w{};
    for (int n = 0; n < kFftSize; ++n)
      w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / kFftSize);
    return w;
  }();
  return window;
}

Spectrogram Analyze(std::span<const double> signal) {
  const std::size_t num_frames = NumFramesFor(signal.size());
  if (num_frames == 0) {
    throw Error("signal too short: " + std::to_string(signal.size()) +
                " samples, need at least " + std::to_string(kFftSize));
  }
  const auto& window = AnalysisWindow();
  const FftPlans& plans = Plans();

  Spectrogram spec;
  spec.frames.resize(num_frames);
  std::array<double, kFftSize> buffer;
  for (std::size_t l = 0; l < num_frames; ++l) {
    const double* src = signal.data() + l * kFrameShift;
    for (int n = 0; n < kFftSize; ++n) buffer[n] = src[n] * window[n];
    fftw_execute_dft_r2c(plans.forward, buffer.data(),
                         reinterpret_cast<fftw_complex*>(spec.frames[l].data()));
    // FFTW leaves exact zeros here for real input, but make the invariant
    // explicit.
    spec.frames[l][0].imag(0.0);
    spec.frames[l][kNumBins - 1].imag(0.0);
  }
  return spec;
}

TimeSignal Synthesize(const Spectrogram& spec) {
  if (spec.Empty()) throw Error("cannot synthesize an empty spectrogram");
  const FftPlans& plans = Plans();
  const std::size_t num_frames = spec.NumFrames();
  TimeSignal out((num_frames - 1) * kFrameShift + kFftSize, 0.0);

  // c2r overwrites its input, so every frame goes through a scratch copy.
  SpectralFrame scratch;
  std::array<double, kFftSize> frame;
  for (std::size_t l = 0; l < num_frames; ++l) {
    scratch = spec.frames[l];
    scratch[0].imag(0.0);
    scratch[kNumBins - 1].imag(0.0);
    fftw_execute_dft_c2r(plans.inverse,
                         reinterpret_cast<fftw_complex*>(scratch.data()),
                         frame.data());
    double* dst = out.data() + l * kFrameShift;
    for (int n = 0; n < kFftSize; ++n) dst[n] += frame[n] / kFftSize;
  }
  return out;
}

SampleRange ReconstructionInterior(std::size_t num_samples) {
  const std::size_t num_frames = NumFramesFor(num_samples);
  if (num_frames < 2) return {};
  return {static_cast<std::size_t>(kFrameShift),
          (num_frames - 1) * kFrameShift + kFrameShift};
}

BinVector Magnitudes(const SpectralFrame& frame) {
  BinVector m;
  for (int k = 0; k < kNumBins; ++k) m[k] = std::abs(frame[k]);
  return m;
}

BinVector Powers(const SpectralFrame& frame) {
  BinVector p;
  for (int k = 0; k < kNumBins; ++k) p[k] = std::norm(frame[k]);
  return p;
}

Spectrogram ApplyMasks(const Spectrogram& spec, const StageMasks& masks) {
  if (spec.NumFrames() != masks.NumFrames()) {
    throw Error("mask has " + std::to_string(masks.NumFrames()) +
                " frames but spectrogram has " +
                std::to_string(spec.NumFrames()));
  }
  Spectrogram out;
  out.frames.resize(spec.NumFrames());
  for (std::size_t l = 0; l < spec.NumFrames(); ++l)
    for (int k = 0; k < kNumBins; ++k)
      out.frames[l][k] = spec.frames[l][k] * masks.values[l][k];
  return out;
}

StageMasks MultiplyMasks(std::span<const StageMasks> stages) {
  if (stages.empty()) throw Error("no masks to multiply");
  StageMasks total = stages.front();
  for (std::size_t r = 1; r < stages.size(); ++r) {
    if (stages[r].NumFrames() != total.NumFrames())
      throw Error("stage masks differ in frame count");
    for (std::size_t l = 0; l < total.NumFrames(); ++l)
      for (int k = 0; k < kNumBins; ++k)
        total.values[l][k] *= stages[r].values[l][k];
  }
  return total;
}

}  // namespace cidnn
