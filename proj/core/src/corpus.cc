// core/src/corpus.cc

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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "cidnn/config.h"
#include "cidnn/error.h"
#include "cidnn/wav_io.h"

namespace cidnn {

namespace {

struct Vowel {
  std::array<double, 3> formant;
};

// Rough adult formant frequencies (Hz).
constexpr std::array<Vowel, 6> kVowels = {{{{730, 1090, 2440}},
                                          {{270, 2290, 3010}},
                                          {{300, 870, 2240}},
                                          {{530, 1840, 2480}},
                                          {{570, 840, 2410}},
                                          {{660, 1720, 2410}}}};
constexpr std::array<double, 3> kBandwidth = {90.0, 110.0, 150.0};
constexpr std::array<double, 3> kFormantGain = {1.0, 0.5, 0.25};

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double Envelope(double f, const std::array<double, 3>& formants) {
  double e = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double x = (f - formants[i]) / kBandwidth[i];
    e += kFormantGain[i] / (1.0 + x * x);
  }
  return e / (1.0 + f / 1000.0);
}

std::size_t Samples(double seconds) {
  return static_cast<std::size_t>(std::llround(seconds * kSampleRate));
}

void Normalize(TimeSignal& x, double peak) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m > 0.0)
    for (double& v : x) v *= peak / m;
}

void NormalizeRms(TimeSignal& x, double rms) {
  double s = 0.0;
  for (double v : x) s += v * v;
  s = std::sqrt(s / static_cast<double>(x.size()));
  if (s > 0.0)
    for (double& v : x) v *= rms / s;
}

}  // namespace

TimeSignal SyntheticSpeech(std::uint64_t seed, double duration_s) {
  if (!(duration_s > 0.5)) throw Error("synthetic speech needs more than 0.5 s");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t total = Samples(duration_s);
  TimeSignal out(total, 0.0);
  const double base_f0 = Uniform(rng, 90.0, 230.0);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  std::size_t pos = Samples(Uniform(rng, 0.05, 0.2));
  std::array<double, 3> prev = kVowels[rng() % kVowels.size()].formant;
  // Syllables come in phrases of 2 to 4 separated by longer pauses.
  int phrase_left = 2 + static_cast<int>(rng() % 3);
  while (true) {
    const std::size_t len = Samples(Uniform(rng, 0.12, 0.32));
    if (pos + len + Samples(0.05) > total) break;

    // Fricative onset.
    if (Uniform(rng, 0.0, 1.0) < 0.4) {
      const std::size_t flen = std::min(Samples(Uniform(rng, 0.03, 0.08)), pos);
      const double gain = Uniform(rng, 0.05, 0.15);
      double last = 0.0;
      for (std::size_t i = 0; i < flen; ++i) {
        const double w = gauss(rng);
        const double ramp = std::sin(std::numbers::pi * (i + 0.5) / flen);
        out[pos - flen + i] += gain * ramp * (w - last);
        last = w;
      }
    }

    const std::array<double, 3> next = kVowels[rng() % kVowels.size()].formant;
    const double f0_start = base_f0 * Uniform(rng, 0.85, 1.15);
    const double f0_end = base_f0 * Uniform(rng, 0.8, 1.2);
    const double level = Uniform(rng, 0.4, 1.0);
    const std::size_t ramp = Samples(0.02);
    const std::size_t glide = len * 3 / 10;
    double phase = Uniform(rng, 0.0, kTwoPi);
    constexpr std::size_t kBlock = 32;
    std::vector<double> amps;
    for (std::size_t i = 0; i < len; i += kBlock) {
      const double t = static_cast<double>(i) / len;
      const double f0 = f0_start + (f0_end - f0_start) * t;
      std::array<double, 3> formants = next;
      if (i < glide) {
        const double g = static_cast<double>(i) / glide;
        for (int k = 0; k < 3; ++k) formants[k] = prev[k] + (next[k] - prev[k]) * g;
      }
      const int harmonics = static_cast<int>(7600.0 / f0);
      amps.resize(harmonics);
      for (int h = 0; h < harmonics; ++h) amps[h] = Envelope((h + 1) * f0, formants);
      const double dphi = kTwoPi * f0 / kSampleRate;
      for (std::size_t j = i; j < std::min(i + kBlock, len); ++j) {
        double s = 0.0;
        for (int h = 0; h < harmonics; ++h) s += amps[h] * std::sin((h + 1) * phase);
        double env = level;
        if (j < ramp) env *= 0.5 - 0.5 * std::cos(std::numbers::pi * j / ramp);
        if (len - j <= ramp) env *= 0.5 - 0.5 * std::cos(std::numbers::pi * (len - j) / ramp);
        out[pos + j] += env * s;
        phase = std::fmod(phase + dphi, kTwoPi);
      }
    }
    prev = next;
    if (--phrase_left > 0) {
      pos += len + Samples(Uniform(rng, 0.03, 0.18));
    } else {
      pos += len + Samples(Uniform(rng, 0.35, 0.9));
      phrase_left = 2 + static_cast<int>(rng() % 3);
    }
  }
  Normalize(out, 0.5);
  return out;
}

NoiseKind ParseNoiseKind(const std::string& name) {
  if (name == "white") return NoiseKind::kWhite;
  if (name == "babble") return NoiseKind::kBabble;
  if (name == "lowpass") return NoiseKind::kLowpass;
  throw Error("unknown noise kind '" + name + "' (expected white, babble or lowpass)");
}

std::string NoiseKindName(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kWhite: return "white";
    case NoiseKind::kBabble: return "babble";
    case NoiseKind::kLowpass: return "lowpass";
  }
  return "?";
}

TimeSignal SyntheticNoise(NoiseKind kind, std::uint64_t seed, double duration_s) {
  const std::size_t n = Samples(duration_s);
  TimeSignal out(n, 0.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  switch (kind) {
    case NoiseKind::kWhite:
      for (double& v : out) v = gauss(rng);
      break;
    case NoiseKind::kLowpass: {
      const double a = std::exp(-2.0 * std::numbers::pi * 500.0 / kSampleRate);
      double y1 = 0.0, y2 = 0.0;
      for (double& v : out) {
        y1 = a * y1 + (1.0 - a) * gauss(rng);
        y2 = a * y2 + (1.0 - a) * y1;
        v = y2;
      }
      break;
    }
    case NoiseKind::kBabble: {
      constexpr int kTalkers = 6;
      constexpr double kChunk = 4.0;
      for (int t = 0; t < kTalkers; ++t) {
        std::size_t pos = Samples(Uniform(rng, 0.0, kChunk));
        std::uint64_t utt = 0;
        // Each talker starts mid-stream so the overlay has no common onset.
        TimeSignal first = SyntheticSpeech(DeriveSeed(seed, t * 1000), kChunk);
        for (std::size_t i = 0; i < std::min(pos, n); ++i) out[i] += first[first.size() - pos + i];
        while (pos < n) {
          TimeSignal s = SyntheticSpeech(DeriveSeed(seed, t * 1000 + ++utt), kChunk);
          for (std::size_t i = 0; i < s.size() && pos + i < n; ++i) out[pos + i] += s[i];
          pos += s.size();
        }
      }
      break;
    }
  }
  NormalizeRms(out, 0.1);
  return out;
}

Manifest WriteDeskCorpus(const std::filesystem::path& dir, const DeskCorpusOptions& opt) {
  if (opt.train_utterances < 1 || opt.test_utterances < 0 || opt.validation_utterances < 0)
    throw Error("corpus needs at least one training utterance");
  if (opt.noise_s < opt.utterance_s) throw Error("noise recordings must outlast utterances");
  std::filesystem::create_directories(dir / "speech");
  std::filesystem::create_directories(dir / "noise");
  constexpr std::array<NoiseKind, 3> kinds = {NoiseKind::kWhite, NoiseKind::kBabble,
                                              NoiseKind::kLowpass};
  Manifest manifest;
  std::array<std::filesystem::path, 3> train_noise, test_noise;
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    const std::string name = NoiseKindName(kinds[k]);
    train_noise[k] = dir / "noise" / (name + "_train.wav");
    test_noise[k] = dir / "noise" / (name + "_test.wav");
    WriteWav(train_noise[k], SyntheticNoise(kinds[k], DeriveSeed(opt.seed, 100 + k), opt.noise_s));
    WriteWav(test_noise[k], SyntheticNoise(kinds[k], DeriveSeed(opt.seed, 200 + k),
                                           std::max(opt.utterance_s * 2.0, 10.0)));
  }
  std::uint64_t utt = 0;
  auto speech = [&](const std::string& tag, int i) {
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%04d.wav", tag.c_str(), i);
    const std::filesystem::path p = dir / "speech" / name;
    WriteWav(p, SyntheticSpeech(DeriveSeed(opt.seed, 10000 + utt++), opt.utterance_s));
    return p;
  };
  for (int i = 0; i < opt.train_utterances; ++i) {
    const std::size_t k = static_cast<std::size_t>(i) % kinds.size();
    manifest.entries.push_back(
        {speech("train", i), train_noise[k], std::nullopt, Split::kTrain, NoiseKindName(kinds[k])});
  }
  for (int i = 0; i < opt.validation_utterances; ++i) {
    const std::size_t k = static_cast<std::size_t>(i) % kinds.size();
    manifest.entries.push_back({speech("valid", i), train_noise[k], std::nullopt,
                                Split::kValidation, NoiseKindName(kinds[k])});
  }
  for (int i = 0; i < opt.test_utterances; ++i) {
    const std::filesystem::path p = speech("test", i);
    for (std::size_t k = 0; k < kinds.size(); ++k)
      manifest.entries.push_back({p, test_noise[k], std::nullopt, Split::kTest,
                                  NoiseKindName(kinds[k])});
  }
  WriteManifest(dir / "manifest.tsv", manifest);
  return manifest;
}

}  // namespace cidnn
