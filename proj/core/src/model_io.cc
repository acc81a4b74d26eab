// core/src/model_io.cc

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

#include "cidnn/model_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cidnn/error.h"

namespace cidnn {

namespace {

constexpr char kMagic[4] = {'C', 'I', 'D', 'N'};

class Writer {
 public:
  void Bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
  void U8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void F32(double v) { U32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
  template <typename Derived>
  void Array(const Eigen::DenseBase<Derived>& a) {
    // Row-major for matrices.
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c) F32(a(r, c));
  }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(const std::string& bytes, const std::string& origin) : bytes_(bytes), origin_(origin) {}

  void Need(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n)
      throw Error(origin_ + ": truncated model file (reading " + what + " at byte " +
                  std::to_string(pos_) + ")");
  }
  std::uint8_t U8(const char* what) {
    Need(1, what);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  std::uint32_t U32(const char* what) {
    Need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t U64(const char* what) {
    const std::uint64_t lo = U32(what);
    const std::uint64_t hi = U32(what);
    return lo | (hi << 32);
  }
  double F32(const char* what) { return std::bit_cast<float>(U32(what)); }
  void Matrix(Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols, const char* what) {
    Need(static_cast<std::size_t>(rows * cols) * 4, what);
    m.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = F32(what);
  }
  void Vector(Eigen::VectorXd& v, Eigen::Index n, const char* what) {
    Need(static_cast<std::size_t>(n) * 4, what);
    v.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = F32(what);
  }
  bool AtEnd() const { return pos_ == bytes_.size(); }
  std::size_t pos() const { return pos_; }
  const std::string& origin() const { return origin_; }

 private:
  const std::string& bytes_;
  std::string origin_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string SerializeModel(const ModelFile& model) {
  model.params.Validate();
  Writer w;
  w.Bytes(kMagic, 4);
  w.U32(kModelFormatVersion);
  w.U32(static_cast<std::uint32_t>(model.params.layers.size()));
  for (const DenseLayer& layer : model.params.layers) {
    w.U32(static_cast<std::uint32_t>(layer.spec.in_dim));
    w.U32(static_cast<std::uint32_t>(layer.spec.out_dim));
    w.U8(static_cast<std::uint8_t>(layer.spec.activation));
    w.U8(layer.spec.batchnorm ? 1 : 0);
    w.Array(layer.weights);
    w.Array(layer.bias);
    if (layer.spec.batchnorm) {
      w.Array(layer.bn_gain);
      w.Array(layer.bn_bias);
      w.Array(layer.bn_mean);
      w.Array(layer.bn_var);
    }
  }
  w.U32(static_cast<std::uint32_t>(model.params.bypasses.size()));
  for (const Bypass& b : model.params.bypasses) {
    w.U32(static_cast<std::uint32_t>(b.source));
    w.U32(static_cast<std::uint32_t>(b.dest));
  }
  w.U32(kNumBins);
  for (double v : model.stats.mean) w.F32(v);
  for (double v : model.stats.std) w.F32(v);
  w.U64(model.config_digest);
  return w.Take();
}

ModelFile ParseModel(const std::string& bytes, const std::string& origin) {
  Reader r(bytes, origin);
  r.Need(4, "magic");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw Error(origin + ": bad magic, not a model file");
  for (int i = 0; i < 4; ++i) r.U8("magic");
  const std::uint32_t version = r.U32("version");
  if (version != kModelFormatVersion)
    throw Error(origin + ": unsupported model format version " + std::to_string(version) +
                " (expected " + std::to_string(kModelFormatVersion) + ")");
  const std::uint32_t num_layers = r.U32("layer count");
  if (num_layers == 0 || num_layers > 1024)
    throw Error(origin + ": implausible layer count " + std::to_string(num_layers));

  ModelFile model;
  for (std::uint32_t l = 0; l < num_layers; ++l) {
    DenseLayer layer;
    const std::uint32_t in = r.U32("layer header");
    const std::uint32_t out = r.U32("layer header");
    if (in == 0 || out == 0 || in > (1u << 16) || out > (1u << 16))
      throw Error(origin + ": implausible layer " + std::to_string(l) + " shape " +
                  std::to_string(in) + "x" + std::to_string(out));
    const std::uint8_t act = r.U8("layer header");
    if (act > static_cast<std::uint8_t>(Activation::kSigmoid))
      throw Error(origin + ": unknown activation tag " + std::to_string(act));
    const std::uint8_t bn = r.U8("layer header");
    if (bn > 1) throw Error(origin + ": bad batch-norm flag " + std::to_string(bn));
    layer.spec = {static_cast<int>(in), static_cast<int>(out), static_cast<Activation>(act),
                  bn == 1, 0.0};
    r.Matrix(layer.weights, out, in, "weights");
    r.Vector(layer.bias, out, "bias");
    if (layer.spec.batchnorm) {
      r.Vector(layer.bn_gain, out, "batch-norm gain");
      r.Vector(layer.bn_bias, out, "batch-norm bias");
      r.Vector(layer.bn_mean, out, "batch-norm mean");
      r.Vector(layer.bn_var, out, "batch-norm variance");
    }
    model.params.layers.push_back(std::move(layer));
  }
  const std::uint32_t num_bypasses = r.U32("bypass count");
  if (num_bypasses > num_layers * num_layers)
    throw Error(origin + ": implausible bypass count " + std::to_string(num_bypasses));
  for (std::uint32_t i = 0; i < num_bypasses; ++i) {
    Bypass b;
    b.source = static_cast<int>(r.U32("bypass"));
    b.dest = static_cast<int>(r.U32("bypass"));
    model.params.bypasses.push_back(b);
  }
  const std::uint32_t bins = r.U32("normalization size");
  if (bins != kNumBins)
    throw Error(origin + ": normalization statistics have " + std::to_string(bins) +
                " bins, expected 129");
  for (double& v : model.stats.mean) v = r.F32("normalization mean");
  for (double& v : model.stats.std) v = r.F32("normalization std");
  model.config_digest = r.U64("config digest");
  if (!r.AtEnd())
    throw Error(origin + ": " + std::to_string(bytes.size() - r.pos()) +
                " trailing bytes after model");
  try {
    model.params.Validate();
  } catch (const Error& e) {
    throw Error(origin + ": " + e.what());
  }
  return model;
}

void SaveModel(const std::filesystem::path& path, const ModelFile& model) {
  const std::string bytes = SerializeModel(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write model " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing model " + path.string());
}

ModelFile LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseModel(ss.str(), path.string());
}

}  // namespace cidnn
