//
// Copyright 2026 The mplkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "mplkit/mlp.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "mplkit/error.h"

namespace mplkit {
namespace {

// Offset of layer `layer`'s weight block inside theta.
std::size_t LayerOffset(const MlpArchitecture& arch, std::size_t layer) {
  std::size_t offset = 0;
  for (std::size_t l = 0; l < layer; ++l) {
    offset += arch.layer_sizes[l + 1] * (arch.layer_sizes[l] + 1);
  }
  return offset;
}

void Softmax(std::span<const double> logits, std::vector<double>& out) {
  out.resize(logits.size());
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t j = 0; j < logits.size(); ++j) {
    out[j] = std::exp(logits[j] - max_logit);
    total += out[j];
  }
  for (double& p : out) p /= total;
}

double Activate(Activation a, double v) {
  return a == Activation::kRelu ? (v > 0.0 ? v : 0.0) : std::tanh(v);
}

// Derivative of the activation given its pre-activation input.
double ActivateGrad(Activation a, double pre) {
  if (a == Activation::kRelu) return pre > 0.0 ? 1.0 : 0.0;
  const double t = std::tanh(pre);
  return 1.0 - t * t;
}

}  // namespace

std::string ActivationName(Activation a) {
  return a == Activation::kRelu ? "relu" : "tanh";
}

Activation ParseActivation(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  Fail(ErrorCode::kConfig, "unknown activation '" + name + "'");
}

std::size_t MlpArchitecture::ParameterCount() const {
  return layer_sizes.size() < 2 ? 0 : LayerOffset(*this, num_layers());
}

void MlpArchitecture::Validate() const {
  Require(layer_sizes.size() >= 2, ErrorCode::kConfig,
          "architecture needs at least an input and an output layer");
  for (std::size_t s : layer_sizes) {
    Require(s >= 1, ErrorCode::kConfig, "layer sizes must be positive");
  }
  Require(num_classes() >= 2, ErrorCode::kConfig, "need at least 2 output classes");
  Require(dropout_rate >= 0.0 && dropout_rate < 1.0, ErrorCode::kConfig,
          "dropout rate must lie in [0, 1)");
}

void ModelParams::Validate() const {
  architecture.Validate();
  Require(theta.size() == architecture.ParameterCount(), ErrorCode::kShape,
          "theta has " + std::to_string(theta.size()) + " entries, architecture needs " +
              std::to_string(architecture.ParameterCount()));
  Require(AllFinite(theta), ErrorCode::kNumeric, "theta contains non-finite values");
}

ConstMatrixView ModelParams::weights(std::size_t layer) const {
  const std::size_t rows = architecture.layer_sizes[layer + 1];
  const std::size_t cols = architecture.layer_sizes[layer];
  return {rows, cols,
          std::span<const double>(theta).subspan(LayerOffset(architecture, layer),
                                                 rows * cols)};
}

std::span<const double> ModelParams::bias(std::size_t layer) const {
  const std::size_t rows = architecture.layer_sizes[layer + 1];
  const std::size_t cols = architecture.layer_sizes[layer];
  return std::span<const double>(theta).subspan(
      LayerOffset(architecture, layer) + rows * cols, rows);
}

ModelParams InitParams(const MlpArchitecture& arch, Seed seed) {
  arch.Validate();
  ModelParams params{arch, std::vector<double>(arch.ParameterCount(), 0.0)};
  Rng rng = MakeRng(seed);
  std::size_t offset = 0;
  for (std::size_t l = 0; l < arch.num_layers(); ++l) {
    const std::size_t fan_in = arch.layer_sizes[l];
    const std::size_t fan_out = arch.layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> uniform(-limit, limit);
    for (std::size_t i = 0; i < fan_in * fan_out; ++i) {
      params.theta[offset + i] = uniform(rng);
    }
    offset += fan_out * (fan_in + 1);
  }
  return params;
}

LossBound::LossBound(double b) : b_(b), p_min_(std::exp(-b)) {
  Require(std::isfinite(b) && b > std::log(2.0), ErrorCode::kConfig,
          "loss bound B must exceed log 2, got " + std::to_string(b));
}

double LossBound::Squeeze(double p, std::size_t num_classes) const {
  const double mass = static_cast<double>(num_classes) * p_min_;
  Require(mass < 1.0, ErrorCode::kConfig,
          "loss bound too small for " + std::to_string(num_classes) + " classes");
  return p_min_ + (1.0 - mass) * p;
}

ForwardTrace ForwardWithTrace(const ModelParams& params, std::span<const double> x,
                              Mode mode, std::optional<Seed> dropout_seed) {
  const MlpArchitecture& arch = params.architecture;
  Require(params.theta.size() == arch.ParameterCount(), ErrorCode::kShape,
          "theta length does not match architecture");
  Require(x.size() == arch.input_size(), ErrorCode::kShape,
          "input has " + std::to_string(x.size()) + " features, model expects " +
              std::to_string(arch.input_size()));
  const bool use_dropout = mode == Mode::kTrain && arch.dropout_rate > 0.0;
  Require(!use_dropout || dropout_seed.has_value(), ErrorCode::kConfig,
          "train-mode dropout requires a seed");

  ForwardTrace trace;
  const std::size_t layers = arch.num_layers();
  trace.activations.reserve(layers + 1);
  trace.activations.emplace_back(x.begin(), x.end());
  trace.pre_activations.resize(layers);
  trace.dropout_scale.resize(layers > 0 ? layers - 1 : 0);

  Rng mask_rng = MakeRng(dropout_seed.value_or(0));
  std::bernoulli_distribution keep(1.0 - arch.dropout_rate);
  const double keep_scale = 1.0 / (1.0 - arch.dropout_rate);

  for (std::size_t l = 0; l < layers; ++l) {
    const auto bias = params.bias(l);
    std::vector<double>& pre = trace.pre_activations[l];
    pre.assign(bias.begin(), bias.end());
    MultiplyAdd(params.weights(l), trace.activations.back(), pre);
    if (l + 1 == layers) {
      trace.activations.push_back(pre);
      break;
    }
    std::vector<double> out(pre.size());
    for (std::size_t i = 0; i < pre.size(); ++i) out[i] = Activate(arch.activation, pre[i]);
    if (use_dropout) {
      std::vector<double>& scale = trace.dropout_scale[l];
      scale.resize(out.size());
      for (std::size_t i = 0; i < out.size(); ++i) {
        scale[i] = keep(mask_rng) ? keep_scale : 0.0;
        out[i] *= scale[i];
      }
    }
    trace.activations.push_back(std::move(out));
  }

  Require(AllFinite(trace.activations.back()), ErrorCode::kNumeric,
          "non-finite logits in forward pass");
  Softmax(trace.activations.back(), trace.probabilities);
  return trace;
}

std::vector<double> Forward(const ModelParams& params, std::span<const double> x,
                            Mode mode, std::optional<Seed> dropout_seed) {
  return ForwardWithTrace(params, x, mode, dropout_seed).probabilities;
}

double NllLoss(std::span<const double> probs, std::size_t y, const LossBound& bound) {
  Require(y < probs.size(), ErrorCode::kIndex,
          "label " + std::to_string(y) + " out of range for " +
              std::to_string(probs.size()) + " classes");
  return -std::log(bound.Squeeze(probs[y], probs.size()));
}

double SampleLoss(const ModelParams& params, const Sample& z, const LossBound& bound) {
  return NllLoss(Forward(params, z.x, Mode::kEval), z.y, bound);
}

std::vector<double> Backward(const ModelParams& params, std::span<const Sample> batch,
                             const LossBound& bound, Mode mode, std::optional<Seed> seed) {
  Require(!batch.empty(), ErrorCode::kInput, "backward needs a nonempty batch");
  const MlpArchitecture& arch = params.architecture;
  const std::size_t layers = arch.num_layers();
  const std::size_t k = arch.num_classes();
  const double squeeze = 1.0 - static_cast<double>(k) * bound.p_min();

  std::vector<double> grad(params.theta.size(), 0.0);
  std::vector<double> delta;
  std::vector<double> upstream;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Sample& z = batch[i];
    Require(z.y < k, ErrorCode::kIndex, "label out of range in batch");
    std::optional<Seed> sample_seed;
    if (seed) sample_seed = DeriveSeed(*seed, i);
    const ForwardTrace trace = ForwardWithTrace(params, z.x, mode, sample_seed);
    const auto& p = trace.probabilities;

    // d loss / d logits for the squeezed NLL.
    const double q_y = bound.Squeeze(p[z.y], k);
    const double factor = squeeze * p[z.y] / q_y;
    delta.assign(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      delta[j] = factor * (p[j] - (j == z.y ? 1.0 : 0.0));
    }

    for (std::size_t l = layers; l-- > 0;) {
      const std::size_t rows = arch.layer_sizes[l + 1];
      const std::size_t cols = arch.layer_sizes[l];
      const std::size_t offset = LayerOffset(arch, l);
      MatrixView gw{rows, cols, std::span<double>(grad).subspan(offset, rows * cols)};
      AddOuter(delta, trace.activations[l], gw);
      double* gb = grad.data() + offset + rows * cols;
      for (std::size_t r = 0; r < rows; ++r) gb[r] += delta[r];
      if (l == 0) break;

      upstream.assign(cols, 0.0);
      TransposeMultiplyAdd(params.weights(l), delta, upstream);
      const auto& scale = trace.dropout_scale[l - 1];
      const auto& pre = trace.pre_activations[l - 1];
      for (std::size_t c = 0; c < cols; ++c) {
        double g = upstream[c] * ActivateGrad(arch.activation, pre[c]);
        if (!scale.empty()) g *= scale[c];
        upstream[c] = g;
      }
      delta.swap(upstream);
    }
  }
  Require(AllFinite(grad), ErrorCode::kNumeric, "non-finite gradient");
  return grad;
}

double BatchLoss(const ModelParams& params, std::span<const Sample> batch,
                 const LossBound& bound, Mode mode, std::optional<Seed> seed) {
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    std::optional<Seed> sample_seed;
    if (seed) sample_seed = DeriveSeed(*seed, i);
    const auto probs = ForwardWithTrace(params, batch[i].x, mode, sample_seed).probabilities;
    total += NllLoss(probs, batch[i].y, bound);
  }
  return total;
}

std::size_t ArgMax(std::span<const double> values) {
  return static_cast<std::size_t>(
      std::distance(values.begin(), std::max_element(values.begin(), values.end())));
}

}  // namespace mplkit
