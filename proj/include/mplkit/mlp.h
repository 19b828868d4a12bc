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

#ifndef MPLKIT_MLP_H_
#define MPLKIT_MLP_H_

// Fully-connected classifier with hand-derived gradients.
//
// Parameters live in one flat vector, laid out layer by layer: the weight
// matrix of layer l (rows = fan_out, cols = fan_in, row-major) followed by its
// bias. Snapshots taken from different runs are therefore directly comparable.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mplkit/matrix.h"
#include "mplkit/random.h"

namespace mplkit {

enum class Activation { kRelu, kTanh };

std::string ActivationName(Activation a);
Activation ParseActivation(const std::string& name);

struct MlpArchitecture {
  std::vector<std::size_t> layer_sizes;  // input, hidden..., output
  Activation activation = Activation::kRelu;
  double dropout_rate = 0.0;             // applied after every hidden layer

  std::size_t input_size() const { return layer_sizes.front(); }
  std::size_t num_classes() const { return layer_sizes.back(); }
  std::size_t num_layers() const { return layer_sizes.size() - 1; }  // weight layers
  std::size_t ParameterCount() const;

  // Throws a config error unless there are >= 2 sizes, >= 2 classes and
  // dropout_rate lies in [0, 1).
  void Validate() const;

  bool operator==(const MlpArchitecture&) const = default;
};

struct ModelParams {
  MlpArchitecture architecture;
  std::vector<double> theta;

  // Throws a shape error if theta does not match the architecture, or a
  // numeric error if it holds non-finite entries.
  void Validate() const;

  ConstMatrixView weights(std::size_t layer) const;
  std::span<const double> bias(std::size_t layer) const;

  bool operator==(const ModelParams&) const = default;
};

// Uniform(+-sqrt(6 / (fan_in + fan_out))) weights, zero biases.
ModelParams InitParams(const MlpArchitecture& arch, Seed seed);

struct Sample {
  std::vector<double> x;
  std::size_t y = 0;

  bool operator==(const Sample&) const = default;
};

// Uniform bound B on the per-sample negative log-likelihood. Probabilities are
// squeezed into [p_min, 1 - (k-1) p_min] with p_min = exp(-B) before taking
// the log, which makes |loss| <= B hold for every input.
class LossBound {
 public:
  static constexpr double kDefault = 5.0;

  // Throws a config error unless B > log 2 (so p_min < 0.5).
  explicit LossBound(double b = kDefault);

  double b() const { return b_; }
  double p_min() const { return p_min_; }

  // Squeezed probability of a class whose raw probability is p, for k
  // classes: p_min + (1 - k p_min) p. Throws a config error if k p_min >= 1.
  double Squeeze(double p, std::size_t num_classes) const;

 private:
  double b_;
  double p_min_;
};

enum class Mode { kTrain, kEval };

// Intermediate values of one forward pass, kept for backprop.
struct ForwardTrace {
  // activations[0] is the input; activations[l] for hidden l is the
  // post-activation, post-dropout output; the last entry holds the logits.
  std::vector<std::vector<double>> activations;
  std::vector<std::vector<double>> pre_activations;  // one per weight layer
  std::vector<std::vector<double>> dropout_scale;    // per hidden layer, empty if unused
  std::vector<double> probabilities;
};

// Runs the network on x. In train mode with a nonzero dropout rate, inverted
// dropout masks are drawn from `dropout_seed`, which must then be provided.
ForwardTrace ForwardWithTrace(const ModelParams& params, std::span<const double> x,
                              Mode mode, std::optional<Seed> dropout_seed = std::nullopt);

std::vector<double> Forward(const ModelParams& params, std::span<const double> x,
                            Mode mode = Mode::kEval,
                            std::optional<Seed> dropout_seed = std::nullopt);

// -log(squeezed probs[y]). Throws an index error if y is out of range.
double NllLoss(std::span<const double> probs, std::size_t y, const LossBound& bound);

// Bounded loss of a single sample under a single model in eval mode.
double SampleLoss(const ModelParams& params, const Sample& z, const LossBound& bound);

// Gradient of sum_i NllLoss(f(x_i), y_i) with respect to theta. In train mode
// the dropout masks of sample i come from DeriveSeed(seed, i).
std::vector<double> Backward(const ModelParams& params, std::span<const Sample> batch,
                             const LossBound& bound, Mode mode = Mode::kEval,
                             std::optional<Seed> seed = std::nullopt);

// Sum of bounded losses over a batch, evaluated the same way Backward does.
double BatchLoss(const ModelParams& params, std::span<const Sample> batch,
                 const LossBound& bound, Mode mode = Mode::kEval,
                 std::optional<Seed> seed = std::nullopt);

std::size_t ArgMax(std::span<const double> values);

}  // namespace mplkit

#endif  // MPLKIT_MLP_H_
