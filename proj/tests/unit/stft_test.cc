// tests/unit/stft_test.cc

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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "cidnn/error.h"
#include "test_util.h"

namespace cidnn {
namespace {

// Direct O(K^2) summation of the windowed frame.
SpectralFrame NaiveDft(const double* frame) {
  SpectralFrame out;
  for (int k = 0; k < kNumBins; ++k) {
    std::complex<double> acc = 0.0;
    for (int n = 0; n < kFftSize; ++n) {
      const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / kFftSize);
      const double ang = -2.0 * std::numbers::pi * k * n / kFftSize;
      acc += w * frame[n] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

TEST(Stft, FrameCount) {
  EXPECT_EQ(NumFramesFor(255), 0u);
  EXPECT_EQ(NumFramesFor(256), 1u);
  EXPECT_EQ(NumFramesFor(512), 3u);
  EXPECT_EQ(NumFramesFor(1023), 6u);
}

TEST(Stft, PeriodicHannWindow) {
  const auto& w = AnalysisWindow();
  EXPECT_EQ(w[0], 0.0);
  EXPECT_NEAR(w[128], 1.0, 1e-15);
  for (int n = 0; n < kFrameShift; ++n) EXPECT_NEAR(w[n] + w[n + kFrameShift], 1.0, 1e-15);
}

TEST(Stft, TooShortSignalThrows) {
  TimeSignal x(255, 0.1);
  try {
    Analyze(x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("signal too short"), std::string::npos);
  }
}

TEST(Stft, ZeroSignalGivesZeroBins) {
  const Spectrogram s = Analyze(TimeSignal(512, 0.0));
  ASSERT_EQ(s.NumFrames(), 3u);
  for (const auto& f : s.frames)
    for (const auto& c : f) EXPECT_EQ(c, std::complex<double>(0.0, 0.0));
}

TEST(Stft, CosineAtBinSixteenPeaksThere) {
  const Spectrogram s = Analyze(testing::Tone(2048, 1000.0, 0.5));
  for (std::size_t l = 1; l + 1 < s.NumFrames(); ++l) {
    const BinVector m = Magnitudes(s.frames[l]);
    int best = 0;
    for (int k = 1; k < kNumBins; ++k)
      if (m[k] > m[best]) best = k;
    EXPECT_EQ(best, 16);
  }
}

TEST(Stft, MatchesNaiveDft) {
  const TimeSignal x = testing::RandomSignal(1024, 7);
  const Spectrogram s = Analyze(x);
  for (std::size_t l = 0; l < s.NumFrames(); ++l) {
    const SpectralFrame ref = NaiveDft(x.data() + l * kFrameShift);
    double num = 0.0, den = 0.0;
    for (int k = 0; k < kNumBins; ++k) {
      num += std::norm(s.frames[l][k] - ref[k]);
      den += std::norm(ref[k]);
    }
    EXPECT_LT(std::sqrt(num / den), 1e-9) << "frame " << l;
  }
}

TEST(Stft, EdgeBinsAreReal) {
  const Spectrogram s = Analyze(testing::RandomSignal(800, 3));
  for (const auto& f : s.frames) {
    EXPECT_EQ(f[0].imag(), 0.0);
    EXPECT_EQ(f[kNumBins - 1].imag(), 0.0);
  }
}

TEST(Stft, ParsevalPerFrame) {
  const TimeSignal x = testing::RandomSignal(1024, 11);
  const Spectrogram s = Analyze(x);
  const auto& w = AnalysisWindow();
  for (std::size_t l = 0; l < s.NumFrames(); ++l) {
    double time = 0.0;
    for (int n = 0; n < kFftSize; ++n) {
      const double v = w[n] * x[l * kFrameShift + n];
      time += v * v;
    }
    double freq = std::norm(s.frames[l][0]) + std::norm(s.frames[l][kNumBins - 1]);
    for (int k = 1; k < kNumBins - 1; ++k) freq += 2.0 * std::norm(s.frames[l][k]);
    freq /= kFftSize;
    EXPECT_NEAR(freq / time, 1.0, 1e-9);
  }
}

TEST(Stft, RoundTripRestoresInterior) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const TimeSignal x = testing::RandomSignal(512 + 97 * seed, seed);
    const TimeSignal y = Synthesize(Analyze(x));
    EXPECT_EQ(y.size(), (NumFramesFor(x.size()) - 1) * kFrameShift + kFftSize);
    const SampleRange r = ReconstructionInterior(x.size());
    double peak = 0.0, worst = 0.0;
    for (double v : x) peak = std::max(peak, std::abs(v));
    for (std::size_t i = r.begin; i < r.end; ++i) worst = std::max(worst, std::abs(y[i] - x[i]));
    EXPECT_LT(worst, 1e-10 * peak);
    EXPECT_LT(testing::RelativeL2(y.data() + r.begin, x.data() + r.begin, r.size()), 1e-10);
  }
}

TEST(Stft, ZeroSpectrogramSynthesizesSilence) {
  Spectrogram s;
  s.frames.assign(4, SpectralFrame{});
  for (double v : Synthesize(s)) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(Synthesize(Spectrogram{}), Error);
}

TEST(Stft, AnalyzeOfSynthesisIsIdempotentInside) {
  // A spectrogram that is a valid STFT survives a second round trip.
  const Spectrogram a = Analyze(testing::RandomSignal(2048, 5));
  const Spectrogram b = Analyze(Synthesize(a));
  ASSERT_EQ(a.NumFrames(), b.NumFrames());
  for (std::size_t l = 1; l + 1 < a.NumFrames(); ++l) {
    double num = 0.0, den = 0.0;
    for (int k = 0; k < kNumBins; ++k) {
      num += std::norm(a.frames[l][k] - b.frames[l][k]);
      den += std::norm(a.frames[l][k]);
    }
    EXPECT_LT(std::sqrt(num / den), 1e-9);
  }
}

TEST(Stft, MasksMultiplyComplexBins) {
  const Spectrogram s = Analyze(testing::RandomSignal(1024, 2));
  StageMasks m = StageMasks::Constant(s.NumFrames(), 0.25);
  m.values[1][3] = 0.0;
  const Spectrogram out = ApplyMasks(s, m);
  EXPECT_EQ(out.frames[1][3], std::complex<double>(0.0, 0.0));
  EXPECT_EQ(out.frames[2][5], s.frames[2][5] * 0.25);
  EXPECT_THROW(ApplyMasks(s, StageMasks::Constant(2, 1.0)), Error);
}

TEST(Stft, MultiplyMasksIsElementwiseProduct) {
  StageMasks a = StageMasks::Constant(3, 0.5);
  StageMasks b = StageMasks::Constant(3, 0.4);
  b.values[2][7] = 0.1;
  const std::vector<StageMasks> both = {a, b};
  const StageMasks p = MultiplyMasks(both);
  EXPECT_DOUBLE_EQ(p.values[0][0], 0.2);
  EXPECT_DOUBLE_EQ(p.values[2][7], 0.05);
}

}  // namespace
}  // namespace cidnn
