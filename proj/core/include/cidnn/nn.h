// core/include/cidnn/nn.h

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

#ifndef CIDNN_NN_H_
#define CIDNN_NN_H_

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cidnn {

enum class Activation : std::uint8_t { kIdentity = 0, kLeakyRelu = 1, kSigmoid = 2 };

inline constexpr double kLeakySlope = 0.01;
inline constexpr double kBatchNormEps = 1e-5;
inline constexpr double kBatchNormMomentum = 0.99;

struct LayerSpec {
  int in_dim = 0;
  int out_dim = 0;
  Activation activation = Activation::kLeakyRelu;
  bool batchnorm = true;
  double dropout = 0.0;
};

/// Adds the output of layer `source` to the pre-activation of layer `dest`
/// (0-based layer indices, source < dest, equal widths).
struct Bypass {
  int source = 0;
  int dest = 0;
  bool operator==(const Bypass&) const = default;
};

struct DenseLayer {
  LayerSpec spec;
  Eigen::MatrixXd weights;  // out_dim x in_dim
  Eigen::VectorXd bias;
  // Batch normalization; all four are empty when spec.batchnorm is false.
  Eigen::VectorXd bn_gain;
  Eigen::VectorXd bn_bias;
  Eigen::VectorXd bn_mean;
  Eigen::VectorXd bn_var;
};

struct MlpParams {
  std::vector<DenseLayer> layers;
  std::vector<Bypass> bypasses;

  int InputDim() const { return layers.front().spec.in_dim; }
  int OutputDim() const { return layers.back().spec.out_dim; }
  std::vector<LayerSpec> Specs() const;
  std::size_t NumTrainable() const;
  /// Throws unless dimensions chain and every bypass is valid.
  void Validate() const;
};

/// All forward pairs among hidden layers (every layer but the last) that
/// share an output width.
std::vector<Bypass> AllForwardBypasses(std::span<const LayerSpec> specs);

/// He-normal weights for leaky-ReLU layers, std sqrt(1 / in_dim) otherwise;
/// zero biases; unit BN gain, zero BN bias, running mean 0 and variance 1.
MlpParams InitMlp(std::span<const LayerSpec> specs,
                  std::span<const Bypass> bypasses, std::uint64_t seed);

struct ForwardMode {
  bool training = false;
  std::uint64_t seed = 0;  // dropout stream

  static ForwardMode Train(std::uint64_t seed) { return {true, seed}; }
  static ForwardMode Eval() { return {false, 0}; }
};

struct LayerCache {
  Eigen::MatrixXd normalized;      // BN input after standardization
  Eigen::VectorXd inv_std;         // of the statistics used
  Eigen::MatrixXd pre_activation;  // after bypass addition
  Eigen::MatrixXd dropout_scale;   // 0 or 1 / (1 - p); empty without dropout
};

struct ForwardCache {
  ForwardMode mode;
  /// activations[0] is the input batch, activations[l + 1] the output of
  /// layer l (after dropout).
  std::vector<Eigen::MatrixXd> activations;
  std::vector<LayerCache> layers;
  std::vector<Eigen::VectorXd> batch_mean;
  std::vector<Eigen::VectorXd> batch_var;
};

/// Runs the network on a batch stored column-wise (in_dim x batch). Per
/// layer: affine, batch norm (batch statistics when training, running ones
/// otherwise), plus incoming bypasses, activation, and inverted dropout when
/// training. `params` is not modified; see UpdateBatchNormStatistics.
Eigen::MatrixXd Forward(const MlpParams& params, const Eigen::MatrixXd& batch,
                        const ForwardMode& mode, ForwardCache* cache = nullptr);

/// Folds the batch statistics recorded by a training-mode Forward into the
/// running averages with momentum kBatchNormMomentum.
void UpdateBatchNormStatistics(MlpParams& params, const ForwardCache& cache);

struct LayerGrads {
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;
  Eigen::VectorXd bn_gain;
  Eigen::VectorXd bn_bias;
};

struct MlpGrads {
  std::vector<LayerGrads> layers;
};

/// Exact gradients of sum(output .* output_grad) with respect to every
/// trainable parameter of the cached computation.
MlpGrads Backward(const MlpParams& params, const ForwardCache& cache,
                  const Eigen::MatrixXd& output_grad);

/// A named contiguous block of trainable values. Both views enumerate the
/// blocks in the same order.
struct ParamView {
  std::string name;
  std::span<double> values;
};
std::vector<ParamView> TrainableParameters(MlpParams& params);
std::vector<ParamView> GradientBlocks(MlpGrads& grads);

struct AdamOptions {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamOptions options;
  std::int64_t step = 0;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
};

AdamState InitAdam(const MlpParams& params, const AdamOptions& options = {});

/// One bias-corrected Adam update.
void AdamStep(MlpParams& params, MlpGrads& grads, AdamState& state);

}  // namespace cidnn

#endif  // CIDNN_NN_H_
