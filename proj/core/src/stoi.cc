// core/src/stoi.cc

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

// Short-time objective intelligibility, following the reference MATLAB
// implementation (and its pystoi port) step by step.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "cidnn/error.h"
#include "cidnn/metrics.h"
#include "cidnn/resample.h"
#include "fftw_lock.h"

namespace cidnn {

namespace {

constexpr int kStoiRate = 10000;
constexpr int kFrame = 256;
constexpr int kHop = kFrame / 2;
constexpr int kFft = 512;
constexpr int kBins = kFft / 2 + 1;
constexpr int kBands = 15;
constexpr double kMinFreq = 150.0;
constexpr int kSegment = 30;
constexpr double kBeta = -15.0;
constexpr double kDynamicRange = 40.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// hanning(258)[1:-1]: a Hann window without its zero end points.
const std::vector<double>& FrameWindow() {
  static const std::vector<double> w = [] {
    std::vector<double> v(kFrame);
    for (int n = 0; n < kFrame; ++n)
      v[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (n + 1) / (kFrame + 1));
    return v;
  }();
  return w;
}

struct Plan {
  fftw_plan forward;
  Plan() {
    std::lock_guard<std::mutex> lock(internal::FftwPlannerMutex());
    std::vector<double> in(kFft);
    std::vector<std::complex<double>> out(kBins);
    forward = fftw_plan_dft_r2c_1d(kFft, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
};

const Plan& StoiPlan() {
  static const Plan plan;
  return plan;
}

// One-third octave band matrix rows as [first, last) FFT bin ranges.
std::vector<std::pair<int, int>> ThirdOctaveBands() {
  std::vector<double> f(kBins);
  for (int i = 0; i < kBins; ++i) f[i] = static_cast<double>(kStoiRate) * i / kFft;
  auto nearest = [&](double freq) {
    int best = 0;
    for (int i = 1; i < kBins; ++i)
      if ((f[i] - freq) * (f[i] - freq) < (f[best] - freq) * (f[best] - freq)) best = i;
    return best;
  };
  std::vector<std::pair<int, int>> bands;
  for (int k = 0; k < kBands; ++k) {
    const double lo = kMinFreq * std::pow(2.0, (2.0 * k - 1.0) / 6.0);
    const double hi = kMinFreq * std::pow(2.0, (2.0 * k + 1.0) / 6.0);
    bands.emplace_back(nearest(lo), nearest(hi));
  }
  return bands;
}

// Drops frames more than kDynamicRange dB below the loudest clean frame and
// overlap-adds the survivors of both signals.
void RemoveSilentFrames(std::vector<double>& x, std::vector<double>& y) {
  const auto& w = FrameWindow();
  const long n = static_cast<long>(x.size());
  std::vector<long> starts;
  for (long b = 0; b < n - kFrame; b += kHop) starts.push_back(b);
  std::vector<double> level(starts.size());
  double loudest = -std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < starts.size(); ++f) {
    double e = 0.0;
    for (int i = 0; i < kFrame; ++i) {
      const double v = w[i] * x[starts[f] + i];
      e += v * v;
    }
    level[f] = 20.0 * std::log10(std::sqrt(e) + kEps);
    loudest = std::max(loudest, level[f]);
  }
  std::vector<long> kept;
  for (std::size_t f = 0; f < starts.size(); ++f)
    if (loudest - kDynamicRange - level[f] < 0.0) kept.push_back(starts[f]);
  const std::size_t out_len = kept.empty() ? 0 : (kept.size() - 1) * kHop + kFrame;
  std::vector<double> xs(out_len, 0.0), ys(out_len, 0.0);
  for (std::size_t f = 0; f < kept.size(); ++f) {
    for (int i = 0; i < kFrame; ++i) {
      xs[f * kHop + i] += w[i] * x[kept[f] + i];
      ys[f * kHop + i] += w[i] * y[kept[f] + i];
    }
  }
  x = std::move(xs);
  y = std::move(ys);
}

// Band envelopes, one row per band, one column per frame.
std::vector<std::vector<double>> BandEnvelopes(const std::vector<double>& x,
                                               const std::vector<std::pair<int, int>>& bands) {
  const auto& w = FrameWindow();
  const Plan& plan = StoiPlan();
  std::vector<std::vector<double>> env(kBands);
  std::vector<double> buf(kFft);
  std::vector<std::complex<double>> spec(kBins);
  const long n = static_cast<long>(x.size());
  for (long b = 0; b < n - kFrame; b += kHop) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int i = 0; i < kFrame; ++i) buf[i] = w[i] * x[b + i];
    fftw_execute_dft_r2c(plan.forward, buf.data(), reinterpret_cast<fftw_complex*>(spec.data()));
    for (int k = 0; k < kBands; ++k) {
      double p = 0.0;
      for (int i = bands[k].first; i < bands[k].second; ++i) p += std::norm(spec[i]);
      env[k].push_back(std::sqrt(p));
    }
  }
  return env;
}

double Norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double Stoi(std::span<const double> clean, std::span<const double> processed) {
  if (clean.size() != processed.size())
    throw Error("STOI needs equally long signals, got " + std::to_string(clean.size()) +
                " and " + std::to_string(processed.size()));
  std::vector<double> x = Resample(clean, kStoiRate, kSampleRate);
  std::vector<double> y = Resample(processed, kStoiRate, kSampleRate);
  RemoveSilentFrames(x, y);

  static const std::vector<std::pair<int, int>> bands = ThirdOctaveBands();
  const auto xe = BandEnvelopes(x, bands);
  const auto ye = BandEnvelopes(y, bands);
  const int frames = static_cast<int>(xe[0].size());
  if (frames < kSegment)
    throw Error("STOI input too short: " + std::to_string(frames) +
                " non-silent frames, need " + std::to_string(kSegment));

  const double clip = 1.0 + std::pow(10.0, -kBeta / 20.0);
  double sum = 0.0;
  std::vector<double> xs(kSegment), ys(kSegment);
  long count = 0;
  for (int m = kSegment; m <= frames; ++m) {
    for (int k = 0; k < kBands; ++k) {
      for (int j = 0; j < kSegment; ++j) {
        xs[j] = xe[k][m - kSegment + j];
        ys[j] = ye[k][m - kSegment + j];
      }
      const double scale = Norm(xs) / (Norm(ys) + kEps);
      double xm = 0.0, ym = 0.0;
      for (int j = 0; j < kSegment; ++j) {
        ys[j] = std::min(ys[j] * scale, xs[j] * clip);
        xm += xs[j];
        ym += ys[j];
      }
      xm /= kSegment;
      ym /= kSegment;
      for (int j = 0; j < kSegment; ++j) {
        xs[j] -= xm;
        ys[j] -= ym;
      }
      const double xn = Norm(xs) + kEps;
      const double yn = Norm(ys) + kEps;
      double corr = 0.0;
      for (int j = 0; j < kSegment; ++j) corr += (xs[j] / xn) * (ys[j] / yn);
      sum += corr;
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

}  // namespace cidnn
