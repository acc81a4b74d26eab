// core/src/wav_io.cc

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

#include "cidnn/wav_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "cidnn/error.h"

namespace cidnn {

namespace {

std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void PutU32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void PutU16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

}  // namespace

TimeSignal ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw Error(where + "not a RIFF/WAVE file");

  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t size = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      if (std::memcmp(chunk, "data", 4) == 0) throw Error(where + "truncated data chunk");
      throw Error(where + "truncated chunk");
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw Error(where + "fmt chunk too small");
      const unsigned char* f = bytes.data() + body;
      const std::uint16_t format = ReadU16(f);
      const std::uint16_t channels = ReadU16(f + 2);
      const std::uint32_t rate = ReadU32(f + 4);
      const std::uint16_t bits = ReadU16(f + 14);
      if (format != 1)
        throw Error(where + "audio format " + std::to_string(format) + ", expected PCM (1)");
      if (channels != 1)
        throw Error(where + "expected mono, got " + std::to_string(channels) + " channels");
      if (rate != static_cast<std::uint32_t>(kSampleRate))
        throw Error(where + "expected 16000 Hz, got " + std::to_string(rate) + " Hz");
      if (bits != 16)
        throw Error(where + "expected 16-bit samples, got " + std::to_string(bits));
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) throw Error(where + "missing fmt chunk");
  if (data == nullptr) throw Error(where + "missing data chunk");

  TimeSignal signal(data_size / 2);
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const auto v = static_cast<std::int16_t>(ReadU16(data + 2 * i));
    signal[i] = v / 32768.0;
  }
  return signal;
}

void WriteWav(const std::filesystem::path& path, std::span<const double> signal) {
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(signal.size() * 2);
  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  PutU32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  PutU32(out, 16);
  PutU16(out, 1);
  PutU16(out, 1);
  PutU32(out, kSampleRate);
  PutU32(out, kSampleRate * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  PutU32(out, data_bytes);
  for (double x : signal) {
    const double clipped = std::clamp(x, -1.0, 1.0);
    const auto v = static_cast<std::int16_t>(std::lround(clipped * 32767.0));
    PutU16(out, static_cast<std::uint16_t>(v));
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) throw Error("write failed for " + path.string());
}

}  // namespace cidnn
