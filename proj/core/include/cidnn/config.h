// core/include/cidnn/config.h

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

#ifndef CIDNN_CONFIG_H_
#define CIDNN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace cidnn {

/// Line-oriented `key = value` settings. '#' starts a comment.
class KeyValueConfig {
 public:
  static KeyValueConfig Parse(const std::string& text, const std::string& origin = "config");
  static KeyValueConfig Load(const std::filesystem::path& path);

  void Set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool Has(const std::string& key) const { return values_.count(key) != 0; }

  std::string GetString(const std::string& key, const std::string& fallback) const;
  double GetDouble(const std::string& key, double fallback) const;
  long GetInt(const std::string& key, long fallback) const;
  std::vector<double> GetDoubleList(const std::string& key,
                                    const std::vector<double>& fallback) const;

  /// Throws naming the first key not in `known`.
  void RejectUnknown(const std::set<std::string>& known) const;

  /// Canonical `key = value` lines in key order.
  std::string Serialize() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::string origin_ = "config";
};

/// 64-bit FNV-1a.
std::uint64_t Fnv1a64(const std::string& text);

/// Independent seed for sub-stream `stream` of `base` (splitmix64 finalizer).
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream);

}  // namespace cidnn

#endif  // CIDNN_CONFIG_H_
