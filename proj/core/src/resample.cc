// core/src/resample.cc

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

#include "cidnn/resample.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "cidnn/error.h"

namespace cidnn {

namespace {

// Kaiser design for 60 dB stopband rejection with a transition band one
// tenth of the cutoff, as in Octave's resample().
constexpr double kRejectionDb = 60.0;

std::vector<double> DesignLowpass(int up, int down) {
  const double cutoff = 0.5 / std::max(up, down);  // cycles per upsampled sample
  const double roll_off = cutoff / 10.0;
  const int half = static_cast<int>(std::ceil((kRejectionDb - 8.0) / (28.714 * roll_off)));
  const double beta = 0.1102 * (kRejectionDb - 8.7);
  const int taps = 2 * half + 1;
  const double norm = std::cyl_bessel_i(0.0, beta);
  std::vector<double> h(taps);
  for (int i = 0; i < taps; ++i) {
    const double t = i - half;
    const double r = t / half;
    const double window = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / norm;
    const double sinc = t == 0.0 ? 2.0 * cutoff
                                 : std::sin(2.0 * std::numbers::pi * cutoff * t) /
                                       (std::numbers::pi * t);
    h[i] = sinc * window;
  }
  // Unit DC gain, times the zero-stuffing loss.
  const double sum = std::accumulate(h.begin(), h.end(), 0.0);
  for (double& v : h) v *= up / sum;
  return h;
}

}  // namespace

std::vector<double> Resample(std::span<const double> x, int up, int down) {
  if (up < 1 || down < 1)
    throw Error("resampling factors must be positive, got " + std::to_string(up) + "/" +
                std::to_string(down));
  const int g = std::gcd(up, down);
  up /= g;
  down /= g;
  if (up == 1 && down == 1) return {x.begin(), x.end()};
  const std::vector<double> h = DesignLowpass(up, down);
  const long taps = static_cast<long>(h.size());
  const long delay = (taps - 1) / 2;
  const long n_in = static_cast<long>(x.size());
  const long n_out = (n_in * up + down - 1) / down;
  std::vector<double> y(static_cast<std::size_t>(n_out), 0.0);
  for (long m = 0; m < n_out; ++m) {
    // Upsampled-domain position of this output, shifted by the filter delay.
    const long pos = m * down + delay;
    // Input n contributes h[pos - n * up] when that tap exists.
    long n_hi = pos / up;
    long n_lo = (pos - taps + 1 + up - 1) / up;
    if (pos - taps + 1 < 0) n_lo = 0;
    n_hi = std::min(n_hi, n_in - 1);
    double acc = 0.0;
    for (long n = std::max(n_lo, 0L); n <= n_hi; ++n) acc += x[n] * h[pos - n * up];
    y[m] = acc;
  }
  return y;
}

}  // namespace cidnn
