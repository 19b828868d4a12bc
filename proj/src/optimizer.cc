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

#include "mplkit/optimizer.h"

#include <cmath>
#include <utility>

#include "mplkit/error.h"

namespace mplkit {

std::string OptimizerKindName(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kSgd: return "sgd";
    case OptimizerKind::kRmsprop: return "rmsprop";
    case OptimizerKind::kSgld: return "sgld";
    case OptimizerKind::kPsgld: return "psgld";
  }
  return "sgd";
}

OptimizerKind ParseOptimizerKind(const std::string& name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "rmsprop") return OptimizerKind::kRmsprop;
  if (name == "sgld") return OptimizerKind::kSgld;
  if (name == "psgld") return OptimizerKind::kPsgld;
  Fail(ErrorCode::kConfig, "unknown optimizer '" + name + "'");
}

std::string BaselineGradientName(BaselineGradient g) {
  return g == BaselineGradient::kMean ? "mean" : "scaled";
}

BaselineGradient ParseBaselineGradient(const std::string& name) {
  if (name == "mean") return BaselineGradient::kMean;
  if (name == "scaled") return BaselineGradient::kScaled;
  Fail(ErrorCode::kConfig, "unknown baseline gradient '" + name + "'");
}

void GaussianPrior::Validate() const {
  Require(std::isfinite(variance) && variance > 0.0, ErrorCode::kConfig,
          "prior variance must be positive");
}

void OptimizerConfig::Validate() const {
  schedule.Validate();
  prior.Validate();
  Require(decay > 0.0 && decay < 1.0, ErrorCode::kConfig, "decay must lie in (0, 1)");
  Require(damping > 0.0, ErrorCode::kConfig, "damping must be positive");
}

Optimizer::Optimizer(OptimizerConfig config, std::size_t dim)
    : config_(std::move(config)), noise_rng_(MakeRng(config_.noise_seed)) {
  config_.Validate();
  if (config_.kind == OptimizerKind::kRmsprop || config_.kind == OptimizerKind::kPsgld) {
    v_.assign(dim, 0.0);
  }
}

void Optimizer::UpdateSecondMoment(std::span<const double> grad) {
  if (accumulator_frozen_) return;
  const double a = config_.decay;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    v_[i] = a * v_[i] + (1.0 - a) * grad[i] * grad[i];
  }
}

void Optimizer::Apply(std::span<double> theta, std::span<const double> grad) {
  Require(theta.size() == grad.size(), ErrorCode::kShape,
          "gradient length does not match theta");
  Require(v_.empty() || v_.size() == theta.size(), ErrorCode::kShape,
          "optimizer was built for a different parameter count");
  Require(AllFinite(grad), ErrorCode::kNumeric, "non-finite gradient, step rejected");

  const double eps = config_.schedule.At(t_);
  const double half = eps / 2.0;
  const double lambda = config_.damping;
  auto noise = [this]() { return noise_enabled_ ? normal_(noise_rng_) : 0.0; };

  switch (config_.kind) {
    case OptimizerKind::kSgd:
      for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= eps * grad[i];
      break;
    case OptimizerKind::kRmsprop:
      UpdateSecondMoment(grad);
      for (std::size_t i = 0; i < theta.size(); ++i) {
        theta[i] -= eps * grad[i] / (std::sqrt(v_[i]) + lambda);
      }
      break;
    case OptimizerKind::kSgld: {
      const double sd = std::sqrt(eps);
      for (std::size_t i = 0; i < theta.size(); ++i) {
        theta[i] -= half * grad[i] + sd * noise();
      }
      break;
    }
    case OptimizerKind::kPsgld:
      UpdateSecondMoment(grad);
      for (std::size_t i = 0; i < theta.size(); ++i) {
        const double g = 1.0 / (lambda + std::sqrt(v_[i]));
        theta[i] -= (half * g) * grad[i] + std::sqrt(eps * g) * noise();
      }
      break;
  }
  ++t_;
}

std::vector<double> MinibatchLossGrad(const ModelParams& params,
                                      std::span<const Sample> batch,
                                      std::size_t dataset_size,
                                      const GaussianPrior& prior, const LossBound& bound,
                                      Mode mode, std::optional<Seed> dropout_seed) {
  Require(!batch.empty(), ErrorCode::kInput, "minibatch is empty");
  Require(dataset_size >= batch.size(), ErrorCode::kConfig,
          "dataset size " + std::to_string(dataset_size) + " smaller than batch size " +
              std::to_string(batch.size()));
  std::vector<double> grad = Backward(params, batch, bound, mode, dropout_seed);
  const double scale =
      static_cast<double>(dataset_size) / static_cast<double>(batch.size());
  const double inv_var = 1.0 / prior.variance;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    grad[i] = params.theta[i] * inv_var + scale * grad[i];
  }
  return grad;
}

std::vector<double> BaselineGrad(const ModelParams& params, std::span<const Sample> batch,
                                 std::size_t dataset_size, BaselineGradient scaling,
                                 const LossBound& bound, Mode mode,
                                 std::optional<Seed> dropout_seed) {
  Require(!batch.empty(), ErrorCode::kInput, "minibatch is empty");
  Require(dataset_size >= batch.size(), ErrorCode::kConfig,
          "dataset size smaller than batch size");
  std::vector<double> grad = Backward(params, batch, bound, mode, dropout_seed);
  const double numerator =
      scaling == BaselineGradient::kScaled ? static_cast<double>(dataset_size) : 1.0;
  const double scale = numerator / static_cast<double>(batch.size());
  for (double& g : grad) g *= scale;
  return grad;
}

void TrainingStep(ModelParams& params, Optimizer& optimizer, std::span<const Sample> batch,
                  std::size_t dataset_size, const LossBound& bound,
                  std::optional<Seed> dropout_seed) {
  const Mode mode = params.architecture.dropout_rate > 0.0 ? Mode::kTrain : Mode::kEval;
  const OptimizerConfig& cfg = optimizer.config();
  std::vector<double> grad;
  if (cfg.kind == OptimizerKind::kSgld || cfg.kind == OptimizerKind::kPsgld) {
    grad = MinibatchLossGrad(params, batch, dataset_size, cfg.prior, bound, mode,
                             dropout_seed);
  } else {
    grad = BaselineGrad(params, batch, dataset_size, cfg.baseline_gradient, bound, mode,
                        dropout_seed);
  }
  optimizer.Apply(params.theta, grad);
}

namespace {

void CheckKind(const Optimizer& state, OptimizerKind expected) {
  Require(state.kind() == expected, ErrorCode::kState,
          "optimizer is " + OptimizerKindName(state.kind()) + ", expected " +
              OptimizerKindName(expected));
}

}  // namespace

void SgdStep(ModelParams& params, Optimizer& state, std::span<const Sample> batch,
             std::size_t dataset_size, const LossBound& bound) {
  CheckKind(state, OptimizerKind::kSgd);
  TrainingStep(params, state, batch, dataset_size, bound);
}

void RmspropStep(ModelParams& params, Optimizer& state, std::span<const Sample> batch,
                 std::size_t dataset_size, const LossBound& bound) {
  CheckKind(state, OptimizerKind::kRmsprop);
  TrainingStep(params, state, batch, dataset_size, bound);
}

void SgldStep(ModelParams& params, Optimizer& state, std::span<const Sample> batch,
              std::size_t dataset_size, const LossBound& bound) {
  CheckKind(state, OptimizerKind::kSgld);
  TrainingStep(params, state, batch, dataset_size, bound);
}

void PsgldStep(ModelParams& params, Optimizer& state, std::span<const Sample> batch,
               std::size_t dataset_size, const LossBound& bound) {
  CheckKind(state, OptimizerKind::kPsgld);
  TrainingStep(params, state, batch, dataset_size, bound);
}

}  // namespace mplkit
