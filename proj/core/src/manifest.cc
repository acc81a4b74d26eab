// core/src/manifest.cc

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

#include "cidnn/manifest.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cidnn/error.h"
#include "cidnn/levels.h"
#include "cidnn/stft.h"

namespace cidnn {

Split ParseSplit(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "validation") return Split::kValidation;
  if (name == "test") return Split::kTest;
  throw Error("unknown split '" + name + "' (expected train, validation or test)");
}

std::string SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "validation";
    case Split::kTest: return "test";
  }
  return "?";
}

std::vector<ManifestEntry> Manifest::Select(Split split) const {
  std::vector<ManifestEntry> out;
  for (const auto& e : entries)
    if (e.split == split) out.push_back(e);
  return out;
}

Manifest ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path.string());
  const std::filesystem::path base = path.parent_path();
  Manifest manifest;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (fields.size() != 5)
      throw Error(where + "expected 5 tab-separated fields, got " +
                  std::to_string(fields.size()));
    ManifestEntry e;
    e.speech = fields[0];
    e.noise = fields[1];
    if (e.speech.is_relative()) e.speech = base / e.speech;
    if (e.noise.is_relative()) e.noise = base / e.noise;
    if (fields[2] != "rand") {
      try {
        std::size_t used = 0;
        e.noise_offset_s = std::stod(fields[2], &used);
        if (used != fields[2].size() || *e.noise_offset_s < 0.0) throw Error("bad");
      } catch (const std::exception&) {
        throw Error(where + "offset must be non-negative seconds or 'rand', got '" +
                    fields[2] + "'");
      }
    }
    try {
      e.split = ParseSplit(fields[3]);
    } catch (const Error& err) {
      throw Error(where + err.what());
    }
    e.noise_label = fields[4];
    if (e.noise_label.empty()) throw Error(where + "empty noise label");
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

void WriteManifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write manifest " + path.string());
  const std::filesystem::path base = path.parent_path();
  auto rel = [&](const std::filesystem::path& p) {
    return base.empty() ? p.generic_string() : p.lexically_relative(base).generic_string();
  };
  for (const auto& e : manifest.entries) {
    out << rel(e.speech) << '\t' << rel(e.noise) << '\t';
    if (e.noise_offset_s)
      out << *e.noise_offset_s;
    else
      out << "rand";
    out << '\t' << SplitName(e.split) << '\t' << e.noise_label << '\n';
  }
}

std::size_t ResolveNoiseOffset(const ManifestEntry& entry, std::size_t noise_length,
                               std::size_t speech_length, std::uint64_t seed) {
  if (noise_length < speech_length) {
    throw Error("noise " + entry.noise.string() + " (" + std::to_string(noise_length) +
                " samples) is shorter than speech " + entry.speech.string() + " (" +
                std::to_string(speech_length) + " samples)");
  }
  if (!entry.noise_offset_s) return RandomNoiseOffset(noise_length, speech_length, seed);
  const auto offset =
      static_cast<std::size_t>(std::llround(*entry.noise_offset_s * kSampleRate));
  if (offset > noise_length - speech_length)
    throw Error("noise offset " + std::to_string(*entry.noise_offset_s) + " s leaves too little of " +
                entry.noise.string());
  return offset;
}

}  // namespace cidnn
