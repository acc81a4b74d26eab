// core/include/cidnn/wav_io.h

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

#ifndef CIDNN_WAV_IO_H_
#define CIDNN_WAV_IO_H_

#include <filesystem>
#include <span>

#include "cidnn/stft.h"

namespace cidnn {

/// Reads a RIFF/WAVE file holding 16-bit PCM mono audio at 16 kHz. Samples
/// are divided by 32768. Any other format is rejected with an error that
/// names the offending field.
TimeSignal ReadWav(const std::filesystem::path& path);

/// Writes 16-bit PCM mono at 16 kHz; samples are clipped to [-1, 1] and
/// scaled by 32767.
void WriteWav(const std::filesystem::path& path, std::span<const double> signal);

}  // namespace cidnn

#endif  // CIDNN_WAV_IO_H_
