// core/include/cidnn/evaluation.h

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

#ifndef CIDNN_EVALUATION_H_
#define CIDNN_EVALUATION_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cidnn/classical.h"
#include "cidnn/manifest.h"
#include "cidnn/model_io.h"

namespace cidnn {

enum class MethodKind { kIdentity, kClassical, kCi, kSingle };

/// identity | wf | lsa | sg | ci:R | single:PATH
struct MethodSpec {
  MethodKind kind = MethodKind::kIdentity;
  GainRule rule;
  int stages = 0;
  std::filesystem::path model;

  std::string Name() const;
};

MethodSpec ParseMethod(const std::string& text);

/// Scores of one utterance under one system.
struct UtteranceScores {
  double delta_snr_db = 0.0;
  double ssdr_db = 0.0;
  double wlakr_abs = 0.0;
  double stoi = 0.0;
};

/// Mixture of `speech` and the noise window, total mask of the system, then
/// every measure on the reconstruction interior.
UtteranceScores ScoreUtterance(std::span<const double> speech,
                               std::span<const double> scaled_noise,
                               const StageMasks& total_masks);

struct EvaluationOptions {
  std::vector<double> snr_levels = {-5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
  Split split = Split::kTest;
  std::uint64_t seed = 1;
  int threads = 1;
  /// Stage used by ci:R methods.
  std::optional<ModelFile> model;
};

struct MetricsRow {
  std::string noise_type;
  /// Unset for the all-SNR average row.
  std::optional<double> input_snr_db;
  std::string method;
  int stages = 0;
  UtteranceScores mean;
  int utterances = 0;
};

struct EvaluationReport {
  std::vector<MetricsRow> rows;
  /// One message per (entry, SNR, method) that could not be scored.
  std::vector<std::string> failures;
};

EvaluationReport Evaluate(const Manifest& manifest, const std::vector<MethodSpec>& methods,
                          const EvaluationOptions& options);

/// noise_type,input_snr_db,method,stages,delta_snr_db,ssdr_db,wlakr_abs,stoi
void WriteCsv(std::ostream& out, const EvaluationReport& report);

}  // namespace cidnn

#endif  // CIDNN_EVALUATION_H_
