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

#ifndef MPLKIT_OPTIMIZER_H_
#define MPLKIT_OPTIMIZER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mplkit/mlp.h"
#include "mplkit/random.h"
#include "mplkit/schedule.h"

namespace mplkit {

enum class OptimizerKind { kSgd, kRmsprop, kSgld, kPsgld };

std::string OptimizerKindName(OptimizerKind kind);
OptimizerKind ParseOptimizerKind(const std::string& name);

// Which data gradient the non-Langevin baselines descend.
//   mean:   (1/|B|) sum_i dl_i
//   scaled: (N/|B|) sum_i dl_i, the data term of the Langevin potential
enum class BaselineGradient { kMean, kScaled };

std::string BaselineGradientName(BaselineGradient g);
BaselineGradient ParseBaselineGradient(const std::string& name);

// Isotropic N(0, variance I) prior over theta.
struct GaussianPrior {
  double variance = 1.0;
  void Validate() const;
};

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kSgld;
  StepSchedule schedule;
  GaussianPrior prior;
  double decay = 0.99;    // second-moment decay alpha (rmsprop, psgld)
  double damping = 1e-5;  // lambda_c
  Seed noise_seed = 0;
  BaselineGradient baseline_gradient = BaselineGradient::kScaled;

  void Validate() const;
};

// Mutable state of one optimizer instance: step counter, RMS accumulator and
// the dedicated Gaussian noise stream.
class Optimizer {
 public:
  Optimizer(OptimizerConfig config, std::size_t dim);

  // One update of theta from the gradient of the objective this optimizer
  // descends (the full Langevin potential for sgld/psgld, the baseline data
  // gradient for sgd/rmsprop):
  //   sgd:     theta -= eps g
  //   rmsprop: v = a v + (1-a) g^2;  theta -= eps g / (sqrt(v) + lambda_c)
  //   sgld:    theta -= eps/2 g + eta,      eta ~ N(0, eps)
  //   psgld:   v as rmsprop, G = 1 / (lambda_c + sqrt(v));
  //            theta -= eps/2 G g + eta,    eta ~ N(0, eps G)
  // A non-finite gradient raises a numeric error and leaves every piece of
  // state untouched.
  void Apply(std::span<double> theta, std::span<const double> grad);

  const OptimizerConfig& config() const { return config_; }
  OptimizerKind kind() const { return config_.kind; }
  std::int64_t steps_taken() const { return t_; }
  double current_step_size() const { return config_.schedule.At(t_); }
  std::span<const double> second_moment() const { return v_; }

  // Test hooks.
  void set_noise_enabled(bool enabled) { noise_enabled_ = enabled; }
  void set_accumulator_frozen(bool frozen) { accumulator_frozen_ = frozen; }

 private:
  void UpdateSecondMoment(std::span<const double> grad);

  OptimizerConfig config_;
  std::int64_t t_ = 0;
  std::vector<double> v_;
  Rng noise_rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  bool noise_enabled_ = true;
  bool accumulator_frozen_ = false;
};

// Gradient of the minibatch Langevin potential
//   -log p(theta) + N/|B| sum_{z in B} l(z, theta)
// i.e. theta / sigma^2 + (N/|B|) sum dl. Throws a config error if N < |B|.
std::vector<double> MinibatchLossGrad(const ModelParams& params,
                                      std::span<const Sample> batch,
                                      std::size_t dataset_size,
                                      const GaussianPrior& prior,
                                      const LossBound& bound,
                                      Mode mode = Mode::kEval,
                                      std::optional<Seed> dropout_seed = std::nullopt);

// Data gradient used by sgd/rmsprop, without prior.
std::vector<double> BaselineGrad(const ModelParams& params, std::span<const Sample> batch,
                                 std::size_t dataset_size, BaselineGradient scaling,
                                 const LossBound& bound, Mode mode = Mode::kEval,
                                 std::optional<Seed> dropout_seed = std::nullopt);

// Computes the gradient appropriate for the optimizer's kind on `batch` and
// applies one update to params.theta. Dropout (if the architecture has any)
// runs in train mode with masks derived from `dropout_seed`.
void TrainingStep(ModelParams& params, Optimizer& optimizer, std::span<const Sample> batch,
                  std::size_t dataset_size, const LossBound& bound,
                  std::optional<Seed> dropout_seed = std::nullopt);

// Kind-checked variants; each throws a state error on a kind mismatch.
void SgdStep(ModelParams& params, Optimizer& state, std::span<const Sample> batch,
             std::size_t dataset_size, const LossBound& bound);
void RmspropStep(ModelParams& params, Optimizer& state, std::span<const Sample> batch,
                 std::size_t dataset_size, const LossBound& bound);
void SgldStep(ModelParams& params, Optimizer& state, std::span<const Sample> batch,
              std::size_t dataset_size, const LossBound& bound);
void PsgldStep(ModelParams& params, Optimizer& state, std::span<const Sample> batch,
               std::size_t dataset_size, const LossBound& bound);

}  // namespace mplkit

#endif  // MPLKIT_OPTIMIZER_H_
