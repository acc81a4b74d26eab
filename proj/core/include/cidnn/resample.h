// core/include/cidnn/resample.h

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

#ifndef CIDNN_RESAMPLE_H_
#define CIDNN_RESAMPLE_H_

#include <span>
#include <vector>

namespace cidnn {

/// Rational resampling by up / down with a Kaiser-windowed sinc lowpass
/// (60 dB rejection, transition width a tenth of the cutoff; 581 taps for
/// 16 kHz to 10 kHz), delay compensated so output sample m lines up with
/// input time m * down / up.
std::vector<double> Resample(std::span<const double> x, int up, int down);

}  // namespace cidnn

#endif  // CIDNN_RESAMPLE_H_
