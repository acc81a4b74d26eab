// core/include/cidnn/classical.h

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

#ifndef CIDNN_CLASSICAL_H_
#define CIDNN_CLASSICAL_H_

#include <deque>
#include <span>
#include <string>

#include "cidnn/stft.h"

namespace cidnn {

inline constexpr double kPowerFloor = 1e-12;

/// Minimum-statistics noise PSD tracker with fixed recursive smoothing.
/// The search window is `num_subwindows` blocks of `subwindow_frames` frames
/// (96 frames, about 1.5 s at shift 128).
class NoiseTracker {
 public:
  struct Options {
    double smoothing = 0.85;
    double bias_compensation = 1.5;
    int subwindow_frames = 12;
    int num_subwindows = 8;
  };

  NoiseTracker() : NoiseTracker(Options{}) {}
  explicit NoiseTracker(const Options& options);

  /// Consumes one periodogram frame and returns the noise PSD estimate.
  BinVector Update(const BinVector& power);

  long frame_count() const { return frame_count_; }
  const BinVector& smoothed_periodogram() const { return smoothed_; }

 private:
  Options options_;
  BinVector smoothed_{};
  BinVector current_min_{};
  std::deque<BinVector> minima_;  // completed sub-window minima, newest last
  int subwindow_fill_ = 0;
  long frame_count_ = 0;
};

/// Decision-directed a priori SNR estimator. Call Estimate() for a frame,
/// then Commit() with the power of the enhanced frame |G Y|^2.
class DecisionDirected {
 public:
  explicit DecisionDirected(double alpha = 0.98, double xi_min_db = -15.0);

  /// xi = alpha |S_prev|^2 / noise + (1 - alpha) max(gamma - 1, 0), floored.
  BinVector Estimate(const BinVector& gamma, const BinVector& noise_psd) const;
  void Commit(const BinVector& enhanced_power) { prev_amp_sq_ = enhanced_power; }

  const BinVector& prev_amp_sq() const { return prev_amp_sq_; }
  double alpha() const { return alpha_; }
  double xi_min() const { return xi_min_; }

 private:
  double alpha_;
  double xi_min_;
  BinVector prev_amp_sq_{};
};

enum class GainKind { kWiener, kLsa, kSuperGaussian };

struct GainRule {
  GainKind kind = GainKind::kWiener;
  double xi_min_db = -15.0;
  double g_min = 0.17782794100389229;  // -15 dB
  /// Shape constants of the super-Gaussian MAP amplitude estimator.
  double sg_mu = 1.74;
  double sg_nu = 0.126;
};

GainKind ParseGainKind(const std::string& name);
std::string GainKindName(GainKind kind);

/// E1(v) = integral_v^inf e^-t / t dt by power series below 1 and a Lentz
/// continued fraction above.
double ExponentialIntegralE1(double v);

/// Spectral weight for a priori SNR xi and a posteriori SNR gamma, clamped
/// to [g_min, 1].
///   WF : xi / (1 + xi)
///   LSA: xi / (1 + xi) * exp(E1(v) / 2),  v = xi gamma / (1 + xi)
///   SG : u + sqrt(u^2 + nu / (2 gamma)),  u = 1/2 - mu / (4 sqrt(gamma xi))
double SpectralGain(const GainRule& rule, double xi, double gamma);

struct ClassicalResult {
  TimeSignal enhanced;
  StageMasks masks;
};

/// Frame-wise MS noise tracking, DD a priori SNR and the chosen weighting
/// rule applied to the noisy STFT. Needs at least one second of input.
ClassicalResult EnhanceClassical(std::span<const double> signal,
                                 const GainRule& rule);

/// Same as EnhanceClassical but only produces the per-frame gains.
StageMasks ClassicalMasks(const Spectrogram& noisy, const GainRule& rule);

}  // namespace cidnn

#endif  // CIDNN_CLASSICAL_H_
