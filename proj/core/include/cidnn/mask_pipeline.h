// core/include/cidnn/mask_pipeline.h

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

#ifndef CIDNN_MASK_PIPELINE_H_
#define CIDNN_MASK_PIPELINE_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cidnn/config.h"
#include "cidnn/manifest.h"
#include "cidnn/nn.h"
#include "cidnn/stft.h"

namespace cidnn {

inline constexpr double kNormStdFloor = 1e-8;
inline constexpr std::size_t kMinNormFrames = 1000;

/// Per-bin input magnitude statistics of the training set.
struct NormStats {
  BinVector mean{};
  BinVector std{};
};

/// Mean and standard deviation of every bin over all frames; std is floored
/// at kNormStdFloor. Needs at least kMinNormFrames frames.
NormStats ComputeNormStats(std::span<const BinVector> magnitude_frames);

/// Context frames on each side implied by a network input width.
int ContextFromInputDim(int input_dim);

/// Normalized magnitudes of frames l - context .. l + context concatenated
/// into `out` (size (2 context + 1) * 129). Out-of-range neighbours repeat
/// the first or last frame.
void MakeFeatures(std::span<const BinVector> magnitudes, const NormStats& stats,
                  std::size_t frame, int context, std::span<double> out);

/// Feature matrix with one column per frame of `magnitudes`.
Eigen::MatrixXd FeatureMatrix(std::span<const BinVector> magnitudes,
                              const NormStats& stats, int context);

struct StageOutput {
  Spectrogram output;
  StageMasks masks;
};

/// One enhancement stage: network masks from the normalized magnitude context
/// (eval mode), multiplied onto the complex input so phase is untouched.
StageOutput EnhanceStage(const MlpParams& params, const NormStats& stats,
                         const Spectrogram& input);

/// (1 / 129) * sum_k (est_k - target_k)^2.
double FrameLoss(std::span<const double> est_mag, std::span<const double> target_mag);

enum class TargetKind { kNoisyDelta, kClean };
enum class Preset { kBasic, kTwoStageSingle, kThreeStageSingle };

TargetKind ParseTargetKind(const std::string& name);
std::string TargetKindName(TargetKind kind);
Preset ParsePreset(const std::string& name);
std::string PresetName(Preset preset);

struct Architecture {
  std::vector<LayerSpec> layers;
  std::vector<Bypass> bypasses;
};

/// basic:        645 -> 1024-512-512-512-256 -> 129, 3 bypasses
/// two_stage:   1161 -> 1400-800-512-512-512-256 -> 129, 3 bypasses
/// three_stage: 1677 -> 1800-750-512-512-512-512-256 -> 129, 6 bypasses
/// Hidden layers: leaky ReLU, batch norm, dropout; output: sigmoid, batch norm.
Architecture MakeArchitecture(Preset preset, double dropout);

struct TrainingConfig {
  int minibatch = 128;
  std::vector<double> snr_levels = {-5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
  double target_delta_db = 5.0;
  TargetKind target_kind = TargetKind::kNoisyDelta;
  Preset preset = Preset::kBasic;
  double dropout = 0.2;
  int epochs = 10;
  double learning_rate = 1e-4;
  /// Learning rate multiplier applied after every epoch.
  double lr_decay = 1.0;
  double validation_fraction = 0.2;
  std::uint64_t seed = 1;
  /// Caps the minibatches per epoch; 0 means a full pass.
  long max_steps_per_epoch = 0;

  void Validate() const;
  /// Canonical text form; its hash is stored in model files.
  std::string Serialize() const;
};

/// Reads the training keys of a `key = value` config, falling back to the
/// defaults above. Keys outside `extra_keys` and the training set are errors.
TrainingConfig TrainingConfigFrom(const KeyValueConfig& kv,
                                  const std::set<std::string>& extra_keys = {});

/// Frames of one (utterance, SNR) condition: network input magnitudes and
/// the regression target magnitudes, stored in single precision.
struct TrainingSegment {
  std::vector<std::array<float, kNumBins>> input;
  std::vector<std::array<float, kNumBins>> target;
};

struct ExampleRef {
  std::uint32_t segment;
  std::uint32_t frame;
};

class TrainingSet {
 public:
  void AddSegment(const Spectrogram& input, std::span<const BinVector> target_magnitudes);

  std::size_t NumExamples() const { return examples_.size(); }
  std::size_t NumSegments() const { return segments_.size(); }
  const std::vector<ExampleRef>& examples() const { return examples_; }
  const TrainingSegment& segment(std::size_t i) const { return segments_[i]; }

  /// All input magnitude frames, for normalization statistics.
  std::vector<BinVector> InputFrames() const;

  /// Features of one example plus its target magnitudes.
  void Example(const ExampleRef& ref, const NormStats& stats, int context,
               std::span<double> features, std::span<double> target) const;

  /// Column-wise features, unnormalized input magnitudes and targets.
  void Gather(std::span<const ExampleRef> refs, const NormStats& stats, int context,
              Eigen::MatrixXd& features, Eigen::MatrixXd& input_mag,
              Eigen::MatrixXd& target_mag) const;

 private:
  std::vector<TrainingSegment> segments_;
  std::vector<ExampleRef> examples_;
};

struct TrainingData {
  TrainingSet train;
  TrainingSet validation;
};

/// Mixes every train (and validation) utterance at every configured SNR and
/// emits one example per frame. Targets are the same mixture with the noise
/// attenuated by target_delta_db (noisy_delta) or the clean speech (clean).
/// Without validation entries, validation_fraction of the train utterances
/// are held out by seeded draw.
TrainingData BuildTrainingSet(const Manifest& manifest, const TrainingConfig& cfg);

/// Seeded Fisher-Yates permutation of example references.
void ShuffleExamples(std::vector<ExampleRef>& refs, std::uint64_t seed);

struct EpochRecord {
  int epoch = 0;
  long step = 0;
  double train_loss = 0.0;
  double validation_loss = 0.0;
};

struct TrainResult {
  MlpParams params;
  NormStats stats;
  std::vector<EpochRecord> log;
  int best_epoch = 0;
};

/// Mean frame loss of the eval-mode network over a set.
double EvaluateLoss(const MlpParams& params, const NormStats& stats, const TrainingSet& set);

/// Minibatch training with Adam on mean frame loss of mask * |Y| against the
/// target. Returns the parameters of the epoch with the lowest validation
/// loss. Writes `epoch step train_loss val_loss` lines to `log` when given.
TrainResult Train(const TrainingConfig& cfg, const TrainingData& data,
                  std::ostream* log = nullptr);
TrainResult Train(const TrainingConfig& cfg, const Manifest& manifest,
                  std::ostream* log = nullptr);

}  // namespace cidnn

#endif  // CIDNN_MASK_PIPELINE_H_
