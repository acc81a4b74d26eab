// core/src/classical.cc

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

#include "cidnn/classical.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cidnn/error.h"

namespace cidnn {

NoiseTracker::NoiseTracker(const Options& options) : options_(options) {
  if (options.subwindow_frames < 1 || options.num_subwindows < 1)
    throw Error("noise tracker window must be positive");
  current_min_.fill(std::numeric_limits<double>::infinity());
}

BinVector NoiseTracker::Update(const BinVector& power) {
  const double beta = options_.smoothing;
  for (int k = 0; k < kNumBins; ++k) {
    const double p = std::max(power[k], 0.0);
    smoothed_[k] = frame_count_ == 0 ? p : beta * smoothed_[k] + (1.0 - beta) * p;
    current_min_[k] = std::min(current_min_[k], smoothed_[k]);
  }
  ++frame_count_;

  BinVector noise = current_min_;
  for (const BinVector& m : minima_)
    for (int k = 0; k < kNumBins; ++k) noise[k] = std::min(noise[k], m[k]);
  for (double& v : noise)
    v = std::max(options_.bias_compensation * v, kPowerFloor);

  if (++subwindow_fill_ == options_.subwindow_frames) {
    minima_.push_back(current_min_);
    // The current partial block plus U - 1 completed ones span U blocks.
    while (static_cast<int>(minima_.size()) > options_.num_subwindows - 1)
      minima_.pop_front();
    current_min_.fill(std::numeric_limits<double>::infinity());
    subwindow_fill_ = 0;
  }
  return noise;
}

DecisionDirected::DecisionDirected(double alpha, double xi_min_db)
    : alpha_(alpha), xi_min_(std::pow(10.0, xi_min_db / 10.0)) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("DD alpha must be in (0, 1]");
  prev_amp_sq_.fill(0.0);
}

BinVector DecisionDirected::Estimate(const BinVector& gamma,
                                     const BinVector& noise_psd) const {
  BinVector xi;
  for (int k = 0; k < kNumBins; ++k) {
    const double noise = std::max(noise_psd[k], kPowerFloor);
    const double ml = std::max(gamma[k] - 1.0, 0.0);
    xi[k] = std::max(alpha_ * prev_amp_sq_[k] / noise + (1.0 - alpha_) * ml,
                     xi_min_);
  }
  return xi;
}

GainKind ParseGainKind(const std::string& name) {
  if (name == "wf") return GainKind::kWiener;
  if (name == "lsa") return GainKind::kLsa;
  if (name == "sg") return GainKind::kSuperGaussian;
  throw Error("unknown gain rule '" + name + "' (expected wf, lsa or sg)");
}

std::string GainKindName(GainKind kind) {
  switch (kind) {
    case GainKind::kWiener: return "wf";
    case GainKind::kLsa: return "lsa";
    case GainKind::kSuperGaussian: return "sg";
  }
  return "?";
}

double ExponentialIntegralE1(double v) {
  if (!(v > 0.0)) {
    if (v == 0.0) return std::numeric_limits<double>::infinity();
    throw Error("E1 is only defined for positive arguments");
  }
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 200;
  if (v < 1.0) {
    double sum = 0.0;
    double term = 1.0;  // (-v)^k / k!
    for (int k = 1; k <= kMaxIter; ++k) {
      term *= -v / k;
      const double add = term / k;
      sum += add;
      if (std::abs(add) < kEps * std::abs(sum)) break;
    }
    return -std::numbers::egamma - std::log(v) - sum;
  }
  constexpr double kTiny = 1e-300;
  double b = v + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h * std::exp(-v);
}

double SpectralGain(const GainRule& rule, double xi, double gamma) {
  xi = std::max(xi, std::pow(10.0, rule.xi_min_db / 10.0));
  gamma = std::max(gamma, 0.0);
  double g = 1.0;
  switch (rule.kind) {
    case GainKind::kWiener:
      g = xi / (1.0 + xi);
      break;
    case GainKind::kLsa: {
      const double v = xi * gamma / (1.0 + xi);
      g = v > 0.0 ? xi / (1.0 + xi) * std::exp(0.5 * ExponentialIntegralE1(v)) : 1.0;
      break;
    }
    case GainKind::kSuperGaussian: {
      if (gamma <= 0.0) {
        g = 1.0;
        break;
      }
      const double u = 0.5 - rule.sg_mu / (4.0 * std::sqrt(gamma * xi));
      g = u + std::sqrt(u * u + rule.sg_nu / (2.0 * gamma));
      break;
    }
  }
  if (!std::isfinite(g)) g = 1.0;
  return std::clamp(g, rule.g_min, 1.0);
}

StageMasks ClassicalMasks(const Spectrogram& noisy, const GainRule& rule) {
  NoiseTracker tracker;
  DecisionDirected dd(0.98, rule.xi_min_db);
  StageMasks masks;
  masks.values.resize(noisy.NumFrames());
  BinVector gamma, enhanced;
  for (std::size_t l = 0; l < noisy.NumFrames(); ++l) {
    const BinVector power = Powers(noisy.frames[l]);
    const BinVector noise = tracker.Update(power);
    for (int k = 0; k < kNumBins; ++k) gamma[k] = power[k] / noise[k];
    const BinVector xi = dd.Estimate(gamma, noise);
    for (int k = 0; k < kNumBins; ++k) {
      const double g = SpectralGain(rule, xi[k], gamma[k]);
      masks.values[l][k] = g;
      enhanced[k] = g * g * power[k];
    }
    dd.Commit(enhanced);
  }
  return masks;
}

ClassicalResult EnhanceClassical(std::span<const double> signal,
                                 const GainRule& rule) {
  if (signal.size() < static_cast<std::size_t>(kSampleRate))
    throw Error("classical enhancement needs at least 1 s of audio");
  const Spectrogram noisy = Analyze(signal);
  ClassicalResult result;
  result.masks = ClassicalMasks(noisy, rule);
  result.enhanced = Synthesize(ApplyMasks(noisy, result.masks));
  return result;
}

}  // namespace cidnn
