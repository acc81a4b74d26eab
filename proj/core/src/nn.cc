// core/src/nn.cc

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

#include "cidnn/nn.h"

#include <cmath>
#include <random>

#include "cidnn/error.h"

namespace cidnn {

namespace {

double UniformUnit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void Activate(Activation act, const Eigen::MatrixXd& in, Eigen::MatrixXd& out) {
  switch (act) {
    case Activation::kIdentity:
      out = in;
      break;
    case Activation::kLeakyRelu:
      out = in.array().max(kLeakySlope * in.array());
      break;
    case Activation::kSigmoid:
      out = 1.0 / (1.0 + (-in.array()).exp());
      break;
  }
}

// Multiplies `grad` in place by the activation derivative at `pre`.
void ActivationBackward(Activation act, const Eigen::MatrixXd& pre,
                        Eigen::MatrixXd& grad) {
  switch (act) {
    case Activation::kIdentity:
      break;
    case Activation::kLeakyRelu:
      grad = (pre.array() > 0.0).select(grad.array(), kLeakySlope * grad.array()).matrix();
      break;
    case Activation::kSigmoid: {
      const Eigen::ArrayXXd y = 1.0 / (1.0 + (-pre.array()).exp());
      grad.array() *= y * (1.0 - y);
      break;
    }
  }
}

std::string LayerName(std::size_t l, const char* what) {
  return "layer" + std::to_string(l) + "." + what;
}

}  // namespace

std::vector<LayerSpec> MlpParams::Specs() const {
  std::vector<LayerSpec> specs;
  for (const auto& layer : layers) specs.push_back(layer.spec);
  return specs;
}

std::size_t MlpParams::NumTrainable() const {
  std::size_t n = 0;
  for (const auto& layer : layers)
    n += layer.weights.size() + layer.bias.size() + layer.bn_gain.size() +
         layer.bn_bias.size();
  return n;
}

void MlpParams::Validate() const {
  if (layers.empty()) throw Error("network has no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& s = layers[l].spec;
    if (s.in_dim <= 0 || s.out_dim <= 0)
      throw Error("layer " + std::to_string(l) + " has a non-positive dimension");
    if (!(s.dropout >= 0.0 && s.dropout < 1.0))
      throw Error("layer " + std::to_string(l) + " dropout must be in [0, 1)");
    if (l > 0 && s.in_dim != layers[l - 1].spec.out_dim) {
      throw Error("dimension mismatch: layer " + std::to_string(l) + " expects " +
                  std::to_string(s.in_dim) + " inputs but layer " +
                  std::to_string(l - 1) + " emits " +
                  std::to_string(layers[l - 1].spec.out_dim));
    }
    const auto& w = layers[l].weights;
    if (w.rows() != s.out_dim || w.cols() != s.in_dim ||
        layers[l].bias.size() != s.out_dim)
      throw Error("layer " + std::to_string(l) + " parameter shape mismatch");
    if (s.batchnorm &&
        (layers[l].bn_gain.size() != s.out_dim || layers[l].bn_bias.size() != s.out_dim ||
         layers[l].bn_mean.size() != s.out_dim || layers[l].bn_var.size() != s.out_dim))
      throw Error("layer " + std::to_string(l) + " batch norm shape mismatch");
  }
  for (const Bypass& b : bypasses) {
    const int n = static_cast<int>(layers.size());
    if (b.source < 0 || b.dest >= n || b.source >= b.dest)
      throw Error("bypass " + std::to_string(b.source) + "->" +
                  std::to_string(b.dest) + " must run forward between layers");
    if (layers[b.source].spec.out_dim != layers[b.dest].spec.out_dim) {
      throw Error("bypass " + std::to_string(b.source) + "->" +
                  std::to_string(b.dest) + " connects unequal widths " +
                  std::to_string(layers[b.source].spec.out_dim) + " and " +
                  std::to_string(layers[b.dest].spec.out_dim));
    }
  }
}

std::vector<Bypass> AllForwardBypasses(std::span<const LayerSpec> specs) {
  std::vector<Bypass> edges;
  const int hidden = static_cast<int>(specs.size()) - 1;
  for (int i = 0; i < hidden; ++i)
    for (int j = i + 1; j < hidden; ++j)
      if (specs[i].out_dim == specs[j].out_dim) edges.push_back({i, j});
  return edges;
}

MlpParams InitMlp(std::span<const LayerSpec> specs,
                  std::span<const Bypass> bypasses, std::uint64_t seed) {
  MlpParams params;
  params.bypasses.assign(bypasses.begin(), bypasses.end());
  std::mt19937_64 rng(seed);
  for (const LayerSpec& s : specs) {
    if (s.in_dim <= 0 || s.out_dim <= 0) throw Error("layer dimensions must be positive");
    DenseLayer layer;
    layer.spec = s;
    const double gain = s.activation == Activation::kLeakyRelu ? 2.0 : 1.0;
    std::normal_distribution<double> normal(0.0, std::sqrt(gain / s.in_dim));
    layer.weights.resize(s.out_dim, s.in_dim);
    for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
      for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
        layer.weights(r, c) = normal(rng);
    layer.bias = Eigen::VectorXd::Zero(s.out_dim);
    if (s.batchnorm) {
      layer.bn_gain = Eigen::VectorXd::Ones(s.out_dim);
      layer.bn_bias = Eigen::VectorXd::Zero(s.out_dim);
      layer.bn_mean = Eigen::VectorXd::Zero(s.out_dim);
      layer.bn_var = Eigen::VectorXd::Ones(s.out_dim);
    }
    params.layers.push_back(std::move(layer));
  }
  params.Validate();
  return params;
}

Eigen::MatrixXd Forward(const MlpParams& params, const Eigen::MatrixXd& batch,
                        const ForwardMode& mode, ForwardCache* cache) {
  if (batch.rows() != params.InputDim()) {
    throw Error("batch has " + std::to_string(batch.rows()) +
                " features, network expects " + std::to_string(params.InputDim()));
  }
  if (!batch.allFinite()) throw Error("non-finite value in network input");

  const std::size_t num_layers = params.layers.size();
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c.mode = mode;
  c.activations.assign(num_layers + 1, Eigen::MatrixXd());
  c.layers.assign(num_layers, LayerCache());
  c.batch_mean.assign(num_layers, Eigen::VectorXd());
  c.batch_var.assign(num_layers, Eigen::VectorXd());
  c.activations[0] = batch;

  std::mt19937_64 rng(mode.seed);
  const Eigen::Index n = batch.cols();
  for (std::size_t l = 0; l < num_layers; ++l) {
    const DenseLayer& layer = params.layers[l];
    LayerCache& lc = c.layers[l];
    Eigen::MatrixXd z(layer.spec.out_dim, n);
    z.noalias() = layer.weights * c.activations[l];
    z.colwise() += layer.bias;

    Eigen::MatrixXd h;
    if (layer.spec.batchnorm) {
      Eigen::VectorXd mean, var;
      if (mode.training) {
        mean = z.rowwise().mean();
        var = (z.colwise() - mean).array().square().rowwise().mean();
        c.batch_mean[l] = mean;
        c.batch_var[l] = var;
      } else {
        mean = layer.bn_mean;
        var = layer.bn_var;
      }
      lc.inv_std = (var.array() + kBatchNormEps).rsqrt();
      lc.normalized = (z.colwise() - mean).array().colwise() * lc.inv_std.array();
      h = (lc.normalized.array().colwise() * layer.bn_gain.array()).colwise() +
          layer.bn_bias.array();
    } else {
      h = std::move(z);
    }
    for (const Bypass& b : params.bypasses)
      if (b.dest == static_cast<int>(l)) h += c.activations[b.source + 1];

    Eigen::MatrixXd a;
    Activate(layer.spec.activation, h, a);
    lc.pre_activation = std::move(h);

    if (mode.training && layer.spec.dropout > 0.0) {
      const double p = layer.spec.dropout;
      const double scale = 1.0 / (1.0 - p);
      lc.dropout_scale.resize(a.rows(), a.cols());
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
          lc.dropout_scale(i, j) = UniformUnit(rng) < p ? 0.0 : scale;
      a.array() *= lc.dropout_scale.array();
    }
    c.activations[l + 1] = std::move(a);
  }
  return c.activations.back();
}

void UpdateBatchNormStatistics(MlpParams& params, const ForwardCache& cache) {
  if (!cache.mode.training) return;
  const double n = static_cast<double>(cache.activations.front().cols());
  const double unbias = n > 1.0 ? n / (n - 1.0) : 1.0;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    DenseLayer& layer = params.layers[l];
    if (!layer.spec.batchnorm || cache.batch_mean[l].size() == 0) continue;
    layer.bn_mean = kBatchNormMomentum * layer.bn_mean +
                    (1.0 - kBatchNormMomentum) * cache.batch_mean[l];
    layer.bn_var = kBatchNormMomentum * layer.bn_var +
                   (1.0 - kBatchNormMomentum) * unbias * cache.batch_var[l];
    layer.bn_var = layer.bn_var.cwiseMax(kBatchNormEps);
  }
}

MlpGrads Backward(const MlpParams& params, const ForwardCache& cache,
                  const Eigen::MatrixXd& output_grad) {
  const std::size_t num_layers = params.layers.size();
  if (cache.layers.size() != num_layers || cache.activations.size() != num_layers + 1)
    throw Error("forward cache does not match the network");
  const Eigen::MatrixXd& out = cache.activations.back();
  if (output_grad.rows() != out.rows() || output_grad.cols() != out.cols())
    throw Error("output gradient shape mismatch");

  const Eigen::Index n = out.cols();
  // grad_act[l + 1] is the gradient with respect to activations[l + 1].
  std::vector<Eigen::MatrixXd> grad_act(num_layers + 1);
  grad_act[num_layers] = output_grad;

  MlpGrads grads;
  grads.layers.resize(num_layers);
  for (std::size_t li = num_layers; li-- > 0;) {
    const DenseLayer& layer = params.layers[li];
    const LayerCache& lc = cache.layers[li];
    LayerGrads& g = grads.layers[li];

    Eigen::MatrixXd dh = std::move(grad_act[li + 1]);
    if (dh.size() == 0) dh = Eigen::MatrixXd::Zero(layer.spec.out_dim, n);
    if (lc.dropout_scale.size() != 0) dh.array() *= lc.dropout_scale.array();
    ActivationBackward(layer.spec.activation, lc.pre_activation, dh);

    for (const Bypass& b : params.bypasses) {
      if (b.dest != static_cast<int>(li)) continue;
      Eigen::MatrixXd& target = grad_act[b.source + 1];
      if (target.size() == 0)
        target = dh;
      else
        target += dh;
    }

    Eigen::MatrixXd dz;
    if (layer.spec.batchnorm) {
      g.bn_bias = dh.rowwise().sum();
      g.bn_gain = (dh.array() * lc.normalized.array()).rowwise().sum();
      Eigen::MatrixXd dxhat = dh.array().colwise() * layer.bn_gain.array();
      if (cache.mode.training) {
        const Eigen::VectorXd sum_dxhat = dxhat.rowwise().sum();
        const Eigen::VectorXd sum_dxhat_xhat =
            (dxhat.array() * lc.normalized.array()).rowwise().sum();
        dz = (static_cast<double>(n) * dxhat.array()).colwise() - sum_dxhat.array();
        dz.array() -= lc.normalized.array().colwise() * sum_dxhat_xhat.array();
        dz.array().colwise() *= lc.inv_std.array() / static_cast<double>(n);
      } else {
        dz = dxhat.array().colwise() * lc.inv_std.array();
      }
    } else {
      dz = std::move(dh);
    }

    g.weights.noalias() = dz * cache.activations[li].transpose();
    g.bias = dz.rowwise().sum();
    if (li > 0) {
      Eigen::MatrixXd& below = grad_act[li];
      if (below.size() == 0)
        below.noalias() = layer.weights.transpose() * dz;
      else
        below.noalias() += layer.weights.transpose() * dz;
    }
  }
  return grads;
}

std::vector<ParamView> TrainableParameters(MlpParams& params) {
  std::vector<ParamView> views;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    DenseLayer& layer = params.layers[l];
    views.push_back({LayerName(l, "weights"),
                     {layer.weights.data(), static_cast<std::size_t>(layer.weights.size())}});
    views.push_back({LayerName(l, "bias"),
                     {layer.bias.data(), static_cast<std::size_t>(layer.bias.size())}});
    if (layer.spec.batchnorm) {
      views.push_back({LayerName(l, "bn_gain"),
                       {layer.bn_gain.data(), static_cast<std::size_t>(layer.bn_gain.size())}});
      views.push_back({LayerName(l, "bn_bias"),
                       {layer.bn_bias.data(), static_cast<std::size_t>(layer.bn_bias.size())}});
    }
  }
  return views;
}

std::vector<ParamView> GradientBlocks(MlpGrads& grads) {
  std::vector<ParamView> views;
  for (std::size_t l = 0; l < grads.layers.size(); ++l) {
    LayerGrads& g = grads.layers[l];
    views.push_back({LayerName(l, "weights"),
                     {g.weights.data(), static_cast<std::size_t>(g.weights.size())}});
    views.push_back({LayerName(l, "bias"),
                     {g.bias.data(), static_cast<std::size_t>(g.bias.size())}});
    if (g.bn_gain.size() != 0) {
      views.push_back({LayerName(l, "bn_gain"),
                       {g.bn_gain.data(), static_cast<std::size_t>(g.bn_gain.size())}});
      views.push_back({LayerName(l, "bn_bias"),
                       {g.bn_bias.data(), static_cast<std::size_t>(g.bn_bias.size())}});
    }
  }
  return views;
}

AdamState InitAdam(const MlpParams& params, const AdamOptions& options) {
  AdamState state;
  state.options = options;
  auto add_block = [&](Eigen::Index size) {
    state.first_moment.emplace_back(static_cast<std::size_t>(size), 0.0);
    state.second_moment.emplace_back(static_cast<std::size_t>(size), 0.0);
  };
  for (const DenseLayer& layer : params.layers) {
    add_block(layer.weights.size());
    add_block(layer.bias.size());
    if (layer.spec.batchnorm) {
      add_block(layer.bn_gain.size());
      add_block(layer.bn_bias.size());
    }
  }
  return state;
}

void AdamStep(MlpParams& params, MlpGrads& grads, AdamState& state) {
  auto pv = TrainableParameters(params);
  auto gv = GradientBlocks(grads);
  if (pv.size() != gv.size() || pv.size() != state.first_moment.size())
    throw Error("Adam state does not match the parameters");
  const AdamOptions& o = state.options;
  ++state.step;
  const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(state.step));
  for (std::size_t b = 0; b < pv.size(); ++b) {
    if (pv[b].values.size() != gv[b].values.size())
      throw Error("gradient block " + gv[b].name + " has the wrong size");
    double* p = pv[b].values.data();
    const double* g = gv[b].values.data();
    double* m = state.first_moment[b].data();
    double* v = state.second_moment[b].data();
    for (std::size_t i = 0; i < pv[b].values.size(); ++i) {
      m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * g[i];
      v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * g[i] * g[i];
      p[i] -= o.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + o.eps);
    }
  }
}

}  // namespace cidnn
