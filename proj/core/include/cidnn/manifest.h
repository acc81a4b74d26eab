// core/include/cidnn/manifest.h

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

#ifndef CIDNN_MANIFEST_H_
#define CIDNN_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cidnn {

enum class Split { kTrain, kValidation, kTest };

Split ParseSplit(const std::string& name);
std::string SplitName(Split split);

struct ManifestEntry {
  std::filesystem::path speech;
  std::filesystem::path noise;
  /// Crop offset into the noise file; unset means a seeded random offset.
  std::optional<double> noise_offset_s;
  Split split = Split::kTrain;
  std::string noise_label;
};

/// Tab-separated `speech<TAB>noise<TAB>offset<TAB>split<TAB>label` lines.
/// Offset is seconds or `rand`; relative paths resolve against the manifest
/// directory; blank lines and lines starting with '#' are skipped.
struct Manifest {
  std::vector<ManifestEntry> entries;

  std::vector<ManifestEntry> Select(Split split) const;
};

Manifest ReadManifest(const std::filesystem::path& path);
void WriteManifest(const std::filesystem::path& path, const Manifest& manifest);

/// Noise crop offset in samples for `entry`, using the seeded random draw
/// when the manifest leaves it open.
std::size_t ResolveNoiseOffset(const ManifestEntry& entry, std::size_t noise_length,
                               std::size_t speech_length, std::uint64_t seed);

}  // namespace cidnn

#endif  // CIDNN_MANIFEST_H_
