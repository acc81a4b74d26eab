// tests/unit/corpus_test.cc

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

#include "cidnn/corpus.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "cidnn/error.h"
#include "cidnn/levels.h"
#include "cidnn/wav_io.h"
#include "test_util.h"

namespace cidnn {
namespace {

double Rms(const TimeSignal& x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return std::sqrt(e / x.size());
}

TEST(SyntheticSpeechTest, DeterministicPeakAndPauses) {
  const TimeSignal a = SyntheticSpeech(3, 3.0);
  const TimeSignal b = SyntheticSpeech(3, 3.0);
  const TimeSignal c = SyntheticSpeech(4, 3.0);
  ASSERT_EQ(a.size(), 48000u);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  double peak = 0.0;
  for (double v : a) peak = std::max(peak, std::abs(v));
  EXPECT_NEAR(peak, 0.5, 1e-12);
  // Pauses make the active level clearly exceed the long-term RMS level.
  EXPECT_GT(ActiveSpeechLevelDb(a) - RmsLevelDb(a), 1.0);
}

TEST(SyntheticNoiseTest, KindsHaveUnitLevelAndShape) {
  for (NoiseKind kind : {NoiseKind::kWhite, NoiseKind::kBabble, NoiseKind::kLowpass}) {
    const TimeSignal n = SyntheticNoise(kind, 9, 4.0);
    ASSERT_EQ(n.size(), 64000u);
    EXPECT_NEAR(Rms(n), 0.1, 1e-9) << NoiseKindName(kind);
    EXPECT_EQ(n, SyntheticNoise(kind, 9, 4.0));
    EXPECT_EQ(ParseNoiseKind(NoiseKindName(kind)), kind);
  }
  // Low-pass noise keeps most power below 1 kHz; white noise does not.
  auto low_share = [](const TimeSignal& x) {
    const Spectrogram s = Analyze(x);
    double low = 0.0, all = 0.0;
    for (const auto& f : s.frames)
      for (std::size_t k = 0; k < kNumBins; ++k) {
        const double p = std::norm(f[k]);
        all += p;
        if (k < 16) low += p;
      }
    return low / all;
  };
  EXPECT_GT(low_share(SyntheticNoise(NoiseKind::kLowpass, 1, 4.0)), 0.7);
  EXPECT_LT(low_share(SyntheticNoise(NoiseKind::kWhite, 1, 4.0)), 0.2);
  EXPECT_THROW(ParseNoiseKind("pink"), Error);
}

TEST(DeskCorpusTest, LayoutAndPairing) {
  testing::TempDir dir("desk");
  DeskCorpusOptions opt;
  opt.train_utterances = 5;
  opt.validation_utterances = 2;
  opt.test_utterances = 2;
  opt.utterance_s = 1.0;
  opt.noise_s = 4.0;
  const Manifest m = WriteDeskCorpus(dir.path(), opt);
  EXPECT_EQ(m.Select(Split::kTrain).size(), 5u);
  EXPECT_EQ(m.Select(Split::kValidation).size(), 2u);
  EXPECT_EQ(m.Select(Split::kTest).size(), 6u);
  std::set<std::string> test_labels;
  for (const auto& e : m.Select(Split::kTest)) {
    test_labels.insert(e.noise_label);
    EXPECT_NE(e.noise.filename().string().find("_test"), std::string::npos);
  }
  EXPECT_EQ(test_labels.size(), 3u);
  for (const auto& e : m.Select(Split::kTrain)) {
    EXPECT_NE(e.noise.filename().string().find("_train"), std::string::npos);
    EXPECT_FALSE(e.noise_offset_s.has_value());
  }
  const Manifest read = ReadManifest(dir / "manifest.tsv");
  ASSERT_EQ(read.entries.size(), m.entries.size());
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    EXPECT_EQ(std::filesystem::weakly_canonical(read.entries[i].speech),
              std::filesystem::weakly_canonical(m.entries[i].speech));
    EXPECT_EQ(ReadWav(read.entries[i].speech).size(), 16000u);
  }
}

}  // namespace
}  // namespace cidnn
