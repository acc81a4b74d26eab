// core/src/levels.cc

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

#include "cidnn/levels.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "cidnn/error.h"

namespace cidnn {

double ActiveSpeechLevelDb(std::span<const double> signal,
                           const SpeechLevelOptions& options) {
  const double g = std::exp(-1.0 / (kSampleRate * options.time_constant_s));
  const auto hangover =
      static_cast<long>(std::ceil(options.hangover_s * kSampleRate));

  std::vector<double> envelope(signal.size());
  double p = 0.0, q = 0.0, energy = 0.0, peak = 0.0;
  for (std::size_t n = 0; n < signal.size(); ++n) {
    const double x = signal[n];
    energy += x * x;
    p = g * p + (1.0 - g) * std::abs(x);
    q = g * q + (1.0 - g) * p;
    envelope[n] = q;
    peak = std::max(peak, q);
  }
  if (!(energy > 0.0) || !(peak > 0.0)) throw Error("no active speech");

  const int num_thresholds =
      static_cast<int>(options.threshold_range_db / options.threshold_step_db) + 1;
  std::vector<double> threshold(num_thresholds);
  for (int j = 0; j < num_thresholds; ++j)
    threshold[j] = peak * std::pow(10.0, -j * options.threshold_step_db / 20.0);

  // hang[j] starts saturated so nothing counts before the first crossing.
  std::vector<long> active(num_thresholds, 0);
  std::vector<long> hang(num_thresholds, hangover);
  for (double e : envelope) {
    for (int j = 0; j < num_thresholds; ++j) {
      if (e >= threshold[j]) {
        ++active[j];
        hang[j] = 0;
      } else if (hang[j] < hangover) {
        ++active[j];
        ++hang[j];
      }
    }
  }

  auto active_db = [&](int j) { return 10.0 * std::log10(energy / active[j]); };
  auto excess_db = [&](int j) {
    if (active[j] == 0) return -std::numeric_limits<double>::infinity();
    return active_db(j) - 20.0 * std::log10(threshold[j]);
  };

  // Walk from the lowest threshold upwards until the excess of active level
  // over threshold drops to the margin.
  const int lowest = num_thresholds - 1;
  if (excess_db(lowest) <= options.margin_db) return active_db(lowest);
  for (int j = lowest - 1; j >= 0; --j) {
    const double excess = excess_db(j);
    if (excess > options.margin_db) continue;
    const int below = j + 1;
    if (active[j] == 0) return active_db(below);
    const double excess_below = excess_db(below);
    const double t = (excess_below - options.margin_db) / (excess_below - excess);
    return active_db(below) + t * (active_db(j) - active_db(below));
  }
  return active_db(0);
}

double RmsLevelDb(std::span<const double> signal) {
  double energy = 0.0;
  for (double x : signal) energy += x * x;
  if (signal.empty() || !(energy > 0.0)) throw Error("silent signal has no RMS level");
  return 10.0 * std::log10(energy / static_cast<double>(signal.size()));
}

double MeasuredSnrDb(std::span<const double> speech,
                     std::span<const double> noise) {
  return ActiveSpeechLevelDb(speech) - RmsLevelDb(noise);
}

Mixture MixAtSnr(const MixtureSpec& spec) {
  const std::size_t n = spec.speech.size();
  if (n == 0) throw Error("empty speech signal");
  if (spec.noise.size() < n || spec.noise_offset > spec.noise.size() - n) {
    throw Error("noise too short: need " + std::to_string(n) +
                " samples from offset " + std::to_string(spec.noise_offset) +
                ", have " + std::to_string(spec.noise.size()));
  }
  const auto noise = spec.noise.subspan(spec.noise_offset, n);
  double noise_energy = 0.0;
  for (double x : noise) noise_energy += x * x;
  if (!(noise_energy > 0.0)) throw Error("silent noise cannot be mixed at an SNR");

  const double speech_db = ActiveSpeechLevelDb(spec.speech);
  const double noise_db = RmsLevelDb(noise);
  Mixture out;
  out.noise_gain = std::pow(10.0, (speech_db - spec.input_snr_db - noise_db) / 20.0);
  out.scaled_noise.resize(n);
  out.mixture.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.scaled_noise[i] = out.noise_gain * noise[i];
    out.mixture[i] = spec.speech[i] + out.scaled_noise[i];
  }
  return out;
}

TimeSignal MakeNoisyTarget(std::span<const double> speech,
                           std::span<const double> scaled_noise,
                           double delta_db) {
  if (speech.size() != scaled_noise.size()) {
    throw Error("speech and noise lengths differ (" +
                std::to_string(speech.size()) + " vs " +
                std::to_string(scaled_noise.size()) + ")");
  }
  const double attenuation = std::pow(10.0, -delta_db / 20.0);
  TimeSignal target(speech.size());
  for (std::size_t i = 0; i < speech.size(); ++i)
    target[i] = speech[i] + attenuation * scaled_noise[i];
  return target;
}

std::size_t RandomNoiseOffset(std::size_t noise_length,
                              std::size_t speech_length, std::uint64_t seed) {
  if (noise_length < speech_length) throw Error("noise shorter than speech");
  const std::size_t range = noise_length - speech_length + 1;
  std::mt19937_64 rng(seed);
  return static_cast<std::size_t>(rng() % range);
}

}  // namespace cidnn
