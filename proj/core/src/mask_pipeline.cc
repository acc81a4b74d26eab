// core/src/mask_pipeline.cc

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

#include "cidnn/mask_pipeline.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "cidnn/error.h"
#include "cidnn/levels.h"
#include "cidnn/wav_io.h"

namespace cidnn {

NormStats ComputeNormStats(std::span<const BinVector> frames) {
  if (frames.size() < kMinNormFrames) {
    throw Error("normalization statistics need at least " +
                std::to_string(kMinNormFrames) + " frames, got " +
                std::to_string(frames.size()));
  }
  NormStats stats;
  const double n = static_cast<double>(frames.size());
  for (int k = 0; k < kNumBins; ++k) {
    double sum = 0.0;
    for (const auto& f : frames) sum += f[k];
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& f : frames) sq += (f[k] - mean) * (f[k] - mean);
    stats.mean[k] = mean;
    stats.std[k] = std::max(std::sqrt(sq / n), kNormStdFloor);
  }
  return stats;
}

int ContextFromInputDim(int input_dim) {
  if (input_dim % kNumBins != 0 || (input_dim / kNumBins) % 2 == 0)
    throw Error("input width " + std::to_string(input_dim) +
                " is not an odd number of 129-bin frames");
  return (input_dim / kNumBins - 1) / 2;
}

void MakeFeatures(std::span<const BinVector> magnitudes, const NormStats& stats,
                  std::size_t frame, int context, std::span<double> out) {
  const auto last = static_cast<long>(magnitudes.size()) - 1;
  for (int c = -context; c <= context; ++c) {
    const long src = std::clamp(static_cast<long>(frame) + c, 0L, last);
    double* dst = out.data() + static_cast<std::size_t>(c + context) * kNumBins;
    for (int k = 0; k < kNumBins; ++k)
      dst[k] = (magnitudes[src][k] - stats.mean[k]) / stats.std[k];
  }
}

Eigen::MatrixXd FeatureMatrix(std::span<const BinVector> magnitudes,
                              const NormStats& stats, int context) {
  const Eigen::Index width = (2 * context + 1) * kNumBins;
  Eigen::MatrixXd features(width, static_cast<Eigen::Index>(magnitudes.size()));
  for (std::size_t l = 0; l < magnitudes.size(); ++l)
    MakeFeatures(magnitudes, stats, l, context,
                 {features.col(static_cast<Eigen::Index>(l)).data(),
                  static_cast<std::size_t>(width)});
  return features;
}

StageOutput EnhanceStage(const MlpParams& params, const NormStats& stats,
                         const Spectrogram& input) {
  if (params.OutputDim() != kNumBins)
    throw Error("network emits " + std::to_string(params.OutputDim()) +
                " values, a mask needs 129");
  const int context = ContextFromInputDim(params.InputDim());
  std::vector<BinVector> mags(input.NumFrames());
  for (std::size_t l = 0; l < input.NumFrames(); ++l) mags[l] = Magnitudes(input.frames[l]);

  const Eigen::MatrixXd masks = Forward(params, FeatureMatrix(mags, stats, context),
                                        ForwardMode::Eval());
  StageOutput out;
  out.masks.values.resize(input.NumFrames());
  for (std::size_t l = 0; l < input.NumFrames(); ++l)
    for (int k = 0; k < kNumBins; ++k)
      out.masks.values[l][k] = masks(k, static_cast<Eigen::Index>(l));
  out.output = ApplyMasks(input, out.masks);
  return out;
}

double FrameLoss(std::span<const double> est_mag, std::span<const double> target_mag) {
  if (est_mag.size() != static_cast<std::size_t>(kNumBins) ||
      target_mag.size() != static_cast<std::size_t>(kNumBins))
    throw Error("frame loss expects 129 bins");
  double sum = 0.0;
  for (int k = 0; k < kNumBins; ++k) {
    const double d = est_mag[k] - target_mag[k];
    sum += d * d;
  }
  return sum / kNumBins;
}

TargetKind ParseTargetKind(const std::string& name) {
  if (name == "noisy_delta") return TargetKind::kNoisyDelta;
  if (name == "clean") return TargetKind::kClean;
  throw Error("unknown target_kind '" + name + "' (expected noisy_delta or clean)");
}

std::string TargetKindName(TargetKind kind) {
  return kind == TargetKind::kClean ? "clean" : "noisy_delta";
}

Preset ParsePreset(const std::string& name) {
  if (name == "basic") return Preset::kBasic;
  if (name == "two_stage") return Preset::kTwoStageSingle;
  if (name == "three_stage") return Preset::kThreeStageSingle;
  throw Error("unknown preset '" + name + "' (expected basic, two_stage or three_stage)");
}

std::string PresetName(Preset preset) {
  switch (preset) {
    case Preset::kBasic: return "basic";
    case Preset::kTwoStageSingle: return "two_stage";
    case Preset::kThreeStageSingle: return "three_stage";
  }
  return "?";
}

Architecture MakeArchitecture(Preset preset, double dropout) {
  int context = 2;
  std::vector<int> hidden;
  switch (preset) {
    case Preset::kBasic:
      hidden = {1024, 512, 512, 512, 256};
      break;
    case Preset::kTwoStageSingle:
      context = 4;
      hidden = {1400, 800, 512, 512, 512, 256};
      break;
    case Preset::kThreeStageSingle:
      context = 6;
      hidden = {1800, 750, 512, 512, 512, 512, 256};
      break;
  }
  Architecture arch;
  int in = (2 * context + 1) * kNumBins;
  for (int width : hidden) {
    arch.layers.push_back({in, width, Activation::kLeakyRelu, true, dropout});
    in = width;
  }
  arch.layers.push_back({in, kNumBins, Activation::kSigmoid, true, 0.0});
  arch.bypasses = AllForwardBypasses(arch.layers);
  return arch;
}

void TrainingConfig::Validate() const {
  if (minibatch < 2) throw Error("minibatch must be at least 2 (batch norm)");
  if (snr_levels.empty()) throw Error("snr_levels must not be empty");
  if (!(target_delta_db > 0.0) && target_kind == TargetKind::kNoisyDelta)
    throw Error("target_delta_db must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw Error("dropout must be in [0, 1)");
  if (epochs < 0) throw Error("epochs must be non-negative");
  if (!(learning_rate > 0.0)) throw Error("learning_rate must be positive");
  if (!(lr_decay > 0.0)) throw Error("lr_decay must be positive");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
    throw Error("validation_fraction must be in [0, 1)");
  if (max_steps_per_epoch < 0) throw Error("max_steps_per_epoch must be non-negative");
}

std::string TrainingConfig::Serialize() const {
  std::ostringstream out;
  out.precision(17);
  out << "dropout = " << dropout << "\n"
      << "epochs = " << epochs << "\n"
      << "learning_rate = " << learning_rate << "\n"
      << "lr_decay = " << lr_decay << "\n"
      << "max_steps_per_epoch = " << max_steps_per_epoch << "\n"
      << "minibatch = " << minibatch << "\n"
      << "preset = " << PresetName(preset) << "\n"
      << "seed = " << seed << "\n"
      << "snr_levels = ";
  for (std::size_t i = 0; i < snr_levels.size(); ++i)
    out << (i ? "," : "") << snr_levels[i];
  out << "\n"
      << "target_delta_db = " << target_delta_db << "\n"
      << "target_kind = " << TargetKindName(target_kind) << "\n"
      << "validation_fraction = " << validation_fraction << "\n";
  return out.str();
}

TrainingConfig TrainingConfigFrom(const KeyValueConfig& kv,
                                  const std::set<std::string>& extra_keys) {
  std::set<std::string> known = {"dropout",     "epochs",          "learning_rate",
                                 "lr_decay",    "max_steps_per_epoch", "minibatch",
                                 "preset",      "seed",            "snr_levels",
                                 "target_delta_db", "target_kind", "validation_fraction"};
  known.insert(extra_keys.begin(), extra_keys.end());
  kv.RejectUnknown(known);

  TrainingConfig cfg;
  cfg.dropout = kv.GetDouble("dropout", cfg.dropout);
  cfg.epochs = static_cast<int>(kv.GetInt("epochs", cfg.epochs));
  cfg.learning_rate = kv.GetDouble("learning_rate", cfg.learning_rate);
  cfg.lr_decay = kv.GetDouble("lr_decay", cfg.lr_decay);
  cfg.max_steps_per_epoch = kv.GetInt("max_steps_per_epoch", cfg.max_steps_per_epoch);
  cfg.minibatch = static_cast<int>(kv.GetInt("minibatch", cfg.minibatch));
  cfg.preset = ParsePreset(kv.GetString("preset", PresetName(cfg.preset)));
  const long seed = kv.GetInt("seed", static_cast<long>(cfg.seed));
  if (seed < 0) throw Error("seed must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.snr_levels = kv.GetDoubleList("snr_levels", cfg.snr_levels);
  cfg.target_delta_db = kv.GetDouble("target_delta_db", cfg.target_delta_db);
  cfg.target_kind = ParseTargetKind(kv.GetString("target_kind", TargetKindName(cfg.target_kind)));
  cfg.validation_fraction = kv.GetDouble("validation_fraction", cfg.validation_fraction);
  cfg.Validate();
  return cfg;
}

void TrainingSet::AddSegment(const Spectrogram& input,
                             std::span<const BinVector> target_magnitudes) {
  if (input.NumFrames() != target_magnitudes.size())
    throw Error("input and target frame counts differ");
  TrainingSegment seg;
  seg.input.resize(input.NumFrames());
  seg.target.resize(input.NumFrames());
  for (std::size_t l = 0; l < input.NumFrames(); ++l) {
    for (int k = 0; k < kNumBins; ++k) {
      seg.input[l][k] = static_cast<float>(std::abs(input.frames[l][k]));
      seg.target[l][k] = static_cast<float>(target_magnitudes[l][k]);
    }
  }
  const auto index = static_cast<std::uint32_t>(segments_.size());
  for (std::size_t l = 0; l < seg.input.size(); ++l)
    examples_.push_back({index, static_cast<std::uint32_t>(l)});
  segments_.push_back(std::move(seg));
}

std::vector<BinVector> TrainingSet::InputFrames() const {
  std::vector<BinVector> frames;
  frames.reserve(examples_.size());
  for (const auto& seg : segments_) {
    for (const auto& f : seg.input) {
      BinVector v;
      std::copy(f.begin(), f.end(), v.begin());
      frames.push_back(v);
    }
  }
  return frames;
}

void TrainingSet::Example(const ExampleRef& ref, const NormStats& stats, int context,
                          std::span<double> features, std::span<double> target) const {
  const TrainingSegment& seg = segments_[ref.segment];
  const long last = static_cast<long>(seg.input.size()) - 1;
  for (int c = -context; c <= context; ++c) {
    const long src = std::clamp(static_cast<long>(ref.frame) + c, 0L, last);
    double* dst = features.data() + static_cast<std::size_t>(c + context) * kNumBins;
    for (int k = 0; k < kNumBins; ++k)
      dst[k] = (static_cast<double>(seg.input[src][k]) - stats.mean[k]) / stats.std[k];
  }
  for (int k = 0; k < kNumBins; ++k) target[k] = seg.target[ref.frame][k];
}

void TrainingSet::Gather(std::span<const ExampleRef> refs, const NormStats& stats,
                         int context, Eigen::MatrixXd& features,
                         Eigen::MatrixXd& input_mag, Eigen::MatrixXd& target_mag) const {
  const auto n = static_cast<Eigen::Index>(refs.size());
  const Eigen::Index width = (2 * context + 1) * kNumBins;
  features.resize(width, n);
  input_mag.resize(kNumBins, n);
  target_mag.resize(kNumBins, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const ExampleRef& ref = refs[static_cast<std::size_t>(j)];
    Example(ref, stats, context, {features.col(j).data(), static_cast<std::size_t>(width)},
            {target_mag.col(j).data(), static_cast<std::size_t>(kNumBins)});
    const auto& mags = segments_[ref.segment].input[ref.frame];
    for (int k = 0; k < kNumBins; ++k) input_mag(k, j) = mags[k];
  }
}

void ShuffleExamples(std::vector<ExampleRef>& refs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = refs.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(refs[i - 1], refs[j]);
  }
}

namespace {

void AddUtterance(const ManifestEntry& entry, std::size_t entry_index,
                  const TrainingConfig& cfg, TrainingSet& set) {
  TimeSignal speech, noise;
  try {
    speech = ReadWav(entry.speech);
    noise = ReadWav(entry.noise);
  } catch (const Error& e) {
    throw Error(std::string("manifest entry ") + std::to_string(entry_index) + ": " + e.what());
  }
  const std::size_t offset = ResolveNoiseOffset(entry, noise.size(), speech.size(),
                                                 DeriveSeed(cfg.seed, entry_index));
  std::vector<BinVector> clean_mags;
  if (cfg.target_kind == TargetKind::kClean) {
    const Spectrogram clean = Analyze(speech);
    for (const auto& f : clean.frames) clean_mags.push_back(Magnitudes(f));
  }
  for (double snr : cfg.snr_levels) {
    const Mixture mix = MixAtSnr({speech, noise, snr, offset});
    const Spectrogram input = Analyze(mix.mixture);
    if (cfg.target_kind == TargetKind::kClean) {
      set.AddSegment(input, clean_mags);
    } else {
      const Spectrogram target =
          Analyze(MakeNoisyTarget(speech, mix.scaled_noise, cfg.target_delta_db));
      std::vector<BinVector> target_mags;
      for (const auto& f : target.frames) target_mags.push_back(Magnitudes(f));
      set.AddSegment(input, target_mags);
    }
  }
}

}  // namespace

TrainingData BuildTrainingSet(const Manifest& manifest, const TrainingConfig& cfg) {
  cfg.Validate();
  std::vector<std::size_t> train_idx, val_idx;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    if (manifest.entries[i].split == Split::kTrain) train_idx.push_back(i);
    if (manifest.entries[i].split == Split::kValidation) val_idx.push_back(i);
  }
  if (train_idx.empty()) throw Error("manifest has no train entries");
  if (val_idx.empty() && cfg.validation_fraction > 0.0 && train_idx.size() > 1) {
    auto held = static_cast<std::size_t>(std::llround(cfg.validation_fraction * train_idx.size()));
    held = std::clamp<std::size_t>(held, 1, train_idx.size() - 1);
    std::mt19937_64 rng(DeriveSeed(cfg.seed, 0x76616c));
    for (std::size_t i = train_idx.size(); i > 1; --i)
      std::swap(train_idx[i - 1], train_idx[static_cast<std::size_t>(rng() % i)]);
    val_idx.assign(train_idx.end() - static_cast<long>(held), train_idx.end());
    train_idx.resize(train_idx.size() - held);
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(val_idx.begin(), val_idx.end());
  }
  TrainingData data;
  for (std::size_t i : train_idx) AddUtterance(manifest.entries[i], i, cfg, data.train);
  for (std::size_t i : val_idx) AddUtterance(manifest.entries[i], i, cfg, data.validation);
  return data;
}

double EvaluateLoss(const MlpParams& params, const NormStats& stats, const TrainingSet& set) {
  if (set.NumExamples() == 0) return std::numeric_limits<double>::quiet_NaN();
  const int context = ContextFromInputDim(params.InputDim());
  constexpr std::size_t kChunk = 2048;
  Eigen::MatrixXd features, mags, targets;
  double total = 0.0;
  const auto& refs = set.examples();
  for (std::size_t begin = 0; begin < refs.size(); begin += kChunk) {
    const std::size_t count = std::min(kChunk, refs.size() - begin);
    set.Gather(std::span(refs).subspan(begin, count), stats, context, features, mags, targets);
    const Eigen::MatrixXd masks = Forward(params, features, ForwardMode::Eval());
    total += ((masks.array() * mags.array() - targets.array()).square()).sum() / kNumBins;
  }
  return total / static_cast<double>(refs.size());
}

TrainResult Train(const TrainingConfig& cfg, const TrainingData& data, std::ostream* log) {
  cfg.Validate();
  if (data.train.NumExamples() == 0) throw Error("training set is empty");

  const Architecture arch = MakeArchitecture(cfg.preset, cfg.dropout);
  TrainResult result;
  result.stats = ComputeNormStats(data.train.InputFrames());
  result.params = InitMlp(arch.layers, arch.bypasses, DeriveSeed(cfg.seed, 1));
  const int context = ContextFromInputDim(result.params.InputDim());

  MlpParams params = result.params;
  AdamOptions adam_options;
  adam_options.learning_rate = cfg.learning_rate;
  AdamState adam = InitAdam(params, adam_options);

  if (log) *log << "epoch\tstep\ttrain_loss\tval_loss\n";
  const bool have_validation = data.validation.NumExamples() > 0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<ExampleRef> order = data.train.examples();
  Eigen::MatrixXd features, mags, targets;
  ForwardCache cache;
  long step = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    ShuffleExamples(order, DeriveSeed(cfg.seed, 1000 + static_cast<std::uint64_t>(epoch)));
    double loss_sum = 0.0;
    long batches = 0;
    for (std::size_t begin = 0; begin + 2 <= order.size();
         begin += static_cast<std::size_t>(cfg.minibatch)) {
      if (cfg.max_steps_per_epoch > 0 && batches >= cfg.max_steps_per_epoch) break;
      const std::size_t count =
          std::min(static_cast<std::size_t>(cfg.minibatch), order.size() - begin);
      data.train.Gather(std::span(order).subspan(begin, count), result.stats, context,
                        features, mags, targets);
      ++step;
      const Eigen::MatrixXd masks = Forward(
          params, features, ForwardMode::Train(DeriveSeed(cfg.seed, 1u << 20 | step)), &cache);
      const Eigen::MatrixXd diff = (masks.array() * mags.array() - targets.array()).matrix();
      const double loss = diff.squaredNorm() / (kNumBins * static_cast<double>(count));
      if (!std::isfinite(loss)) {
        throw Error("training diverged: non-finite loss at epoch " + std::to_string(epoch) +
                    ", step " + std::to_string(step) + " (learning rate " +
                    std::to_string(adam.options.learning_rate) + ")");
      }
      const Eigen::MatrixXd grad_out =
          (2.0 / (kNumBins * static_cast<double>(count))) * (diff.array() * mags.array()).matrix();
      MlpGrads grads = Backward(params, cache, grad_out);
      AdamStep(params, grads, adam);
      UpdateBatchNormStatistics(params, cache);
      loss_sum += loss;
      ++batches;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.step = step;
    rec.train_loss = batches ? loss_sum / batches : 0.0;
    rec.validation_loss = have_validation ? EvaluateLoss(params, result.stats, data.validation)
                                          : rec.train_loss;
    if (!std::isfinite(rec.validation_loss))
      throw Error("training diverged: non-finite validation loss at epoch " +
                  std::to_string(epoch));
    result.log.push_back(rec);
    if (log) {
      *log << rec.epoch << '\t' << rec.step << '\t' << rec.train_loss << '\t'
           << rec.validation_loss << '\n';
      log->flush();
    }
    if (rec.validation_loss < best) {
      best = rec.validation_loss;
      result.params = params;
      result.best_epoch = epoch;
    }
    adam.options.learning_rate *= cfg.lr_decay;
  }
  return result;
}

TrainResult Train(const TrainingConfig& cfg, const Manifest& manifest, std::ostream* log) {
  return Train(cfg, BuildTrainingSet(manifest, cfg), log);
}

}  // namespace cidnn
