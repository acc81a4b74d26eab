// core/src/metrics.cc

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

#include "cidnn/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "cidnn/classical.h"
#include "cidnn/error.h"
#include "cidnn/levels.h"

namespace cidnn {

ComponentPair FilteredComponents(const StageMasks& total_masks, const Spectrogram& clean,
                                 const Spectrogram& noise) {
  if (clean.NumFrames() != noise.NumFrames() || total_masks.NumFrames() != clean.NumFrames()) {
    throw Error("component shapes differ: masks " + std::to_string(total_masks.NumFrames()) +
                ", speech " + std::to_string(clean.NumFrames()) + ", noise " +
                std::to_string(noise.NumFrames()) + " frames");
  }
  return {Synthesize(ApplyMasks(clean, total_masks)),
          Synthesize(ApplyMasks(noise, total_masks))};
}

namespace {

bool Silent(std::span<const double> x) {
  for (double v : x)
    if (v != 0.0) return false;
  return true;
}

}  // namespace

double DeltaSnrDb(std::span<const double> speech, std::span<const double> noise,
                  std::span<const double> filtered_speech,
                  std::span<const double> filtered_noise) {
  if (speech.size() != noise.size() || speech.size() != filtered_speech.size() ||
      speech.size() != filtered_noise.size())
    throw Error("delta SNR needs four signals of equal length");
  if (Silent(filtered_noise)) return kDeltaSnrCapDb;
  const double in = ActiveSpeechLevelDb(speech) - RmsLevelDb(noise);
  const double out = ActiveSpeechLevelDb(filtered_speech) - RmsLevelDb(filtered_noise);
  return std::min(out - in, kDeltaSnrCapDb);
}

SsdrResult Ssdr(std::span<const double> speech, std::span<const double> processed,
                const SsdrOptions& opt) {
  if (speech.size() != processed.size())
    throw Error("SSDR needs equally long signals, got " + std::to_string(speech.size()) +
                " and " + std::to_string(processed.size()));
  const long n = static_cast<long>(speech.size());
  std::vector<long> starts;
  std::vector<double> energy;
  for (long b = 0; b + opt.frame_length <= n; b += opt.frame_shift) {
    double e = 0.0;
    for (long i = b; i < b + opt.frame_length; ++i) e += speech[i] * speech[i];
    starts.push_back(b);
    energy.push_back(e);
  }
  double max_energy = 0.0;
  for (double e : energy) max_energy = std::max(max_energy, e);
  if (!(max_energy > 0.0)) throw Error("no speech-active frames");
  const double threshold = max_energy * std::pow(10.0, -opt.active_range_db / 10.0);
  std::vector<std::size_t> active;
  for (std::size_t f = 0; f < energy.size(); ++f)
    if (energy[f] >= threshold) active.push_back(f);

  auto score = [&](int delay) {
    double total = 0.0;
    for (std::size_t f : active) {
      double err = 0.0;
      for (long i = starts[f]; i < starts[f] + opt.frame_length; ++i) {
        const long j = i + delay;
        if (j < 0 || j >= n) continue;
        const double e = processed[j] - speech[i];
        err += e * e;
      }
      const double db = err > 0.0 ? 10.0 * std::log10(energy[f] / err)
                                  : std::numeric_limits<double>::infinity();
      total += std::clamp(db, opt.floor_db, opt.ceiling_db);
    }
    return total;
  };

  // Candidates in order of increasing |delay| so ties keep the smaller shift.
  SsdrResult best{0.0, 0};
  double best_total = score(0);
  for (int d = 1; d <= opt.max_delay; ++d) {
    for (int delay : {d, -d}) {
      const double total = score(delay);
      if (total > best_total) {
        best_total = total;
        best.delay = delay;
      }
    }
  }
  best.ssdr_db = best_total / static_cast<double>(active.size());
  return best;
}

double Wlakr(std::span<const double> noise, std::span<const double> filtered_noise) {
  if (noise.size() != filtered_noise.size())
    throw Error("WLAKR needs equally long signals");
  constexpr std::size_t kFrame = 256;
  struct Moments {
    double m2 = 0.0, m4 = 0.0, energy = 0.0;
  };
  auto moments = [](const double* x) {
    double mean = 0.0;
    for (std::size_t i = 0; i < kFrame; ++i) mean += x[i];
    mean /= kFrame;
    Moments m;
    for (std::size_t i = 0; i < kFrame; ++i) {
      const double c = x[i] - mean;
      m.m2 += c * c;
      m.m4 += c * c * c * c;
      m.energy += x[i] * x[i];
    }
    m.m2 /= kFrame;
    m.m4 /= kFrame;
    return m;
  };
  double weighted = 0.0;
  double total_energy = 0.0;
  for (std::size_t b = 0; b + kFrame <= noise.size(); b += kFrame) {
    const Moments d = moments(noise.data() + b);
    const Moments p = moments(filtered_noise.data() + b);
    if (d.m2 < kPowerFloor || p.m2 < kPowerFloor) continue;
    const double ratio = (p.m4 / (p.m2 * p.m2)) / (d.m4 / (d.m2 * d.m2));
    weighted += d.energy * std::log10(ratio);
    total_energy += d.energy;
  }
  if (!(total_energy > 0.0)) throw Error("WLAKR: noise has no usable frames");
  return weighted / total_energy;
}

}  // namespace cidnn
