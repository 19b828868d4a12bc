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

#include "mplkit/posterior.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mplkit/error.h"

namespace mplkit {

void Trajectory::Record(std::int64_t step, std::span<const double> theta,
                        double step_size) {
  steps.push_back(step);
  thetas.emplace_back(theta.begin(), theta.end());
  step_sizes.push_back(step_size);
}

PosteriorSampleSet::PosteriorSampleSet(std::vector<ModelParams> snapshots,
                                       std::vector<double> step_sizes,
                                       std::int64_t burn_in_start, std::int64_t thinning)
    : snapshots_(std::move(snapshots)),
      step_sizes_(std::move(step_sizes)),
      burn_in_start_(burn_in_start),
      thinning_(thinning) {
  Require(!snapshots_.empty(), ErrorCode::kState, "posterior sample set is empty");
  Require(snapshots_.size() == step_sizes_.size(), ErrorCode::kState,
          "snapshot and step-size lists differ in length");
  for (const ModelParams& s : snapshots_) {
    Require(s.architecture == snapshots_.front().architecture, ErrorCode::kState,
            "snapshots do not share one architecture");
    Require(s.theta.size() == s.architecture.ParameterCount(), ErrorCode::kShape,
            "snapshot theta does not match its architecture");
  }
  for (double eps : step_sizes_) {
    Require(std::isfinite(eps) && eps > 0.0, ErrorCode::kNumeric,
            "step sizes must be positive");
    total_step_size_ += eps;
  }
}

double PosteriorSampleSet::sum_squared_step_size() const {
  double total = 0.0;
  for (double eps : step_sizes_) total += eps * eps;
  return total;
}

std::vector<double> PosteriorSampleSet::weights() const {
  std::vector<double> w(step_sizes_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = step_sizes_[i] / total_step_size_;
  return w;
}

PosteriorSampleSet Collect(const Trajectory& run, std::int64_t burn_in,
                           std::int64_t thinning) {
  Require(thinning >= 1, ErrorCode::kConfig, "thinning must be >= 1");
  Require(burn_in >= 0 && burn_in < run.total_steps, ErrorCode::kConfig,
          "burn-in " + std::to_string(burn_in) + " must be below the run length " +
              std::to_string(run.total_steps));
  std::vector<ModelParams> snapshots;
  std::vector<double> step_sizes;
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    const std::int64_t t = run.steps[i];
    if (t <= burn_in || (t - burn_in) % thinning != 0) continue;
    snapshots.push_back(ModelParams{run.architecture, run.thetas[i]});
    step_sizes.push_back(run.step_sizes[i]);
  }
  Require(!snapshots.empty(), ErrorCode::kConfig,
          "no snapshots recorded after burn-in");
  return PosteriorSampleSet(std::move(snapshots), std::move(step_sizes), burn_in, thinning);
}

EnsemblePredictor::EnsemblePredictor(std::shared_ptr<const PosteriorSampleSet> samples,
                                     EnsembleMode mode, std::size_t first,
                                     std::vector<double> weights)
    : samples_(std::move(samples)), mode_(mode), first_(first), weights_(std::move(weights)) {}

EnsemblePredictor EnsemblePredictor::WeightedAll(
    std::shared_ptr<const PosteriorSampleSet> samples) {
  Require(samples != nullptr, ErrorCode::kState, "missing posterior sample set");
  std::vector<double> w = samples->weights();
  return EnsemblePredictor(std::move(samples), EnsembleMode::kWeightedAll, 0, std::move(w));
}

EnsemblePredictor EnsemblePredictor::LastK(std::shared_ptr<const PosteriorSampleSet> samples,
                                           std::size_t k) {
  Require(samples != nullptr, ErrorCode::kState, "missing posterior sample set");
  Require(k >= 1 && k <= samples->size(), ErrorCode::kConfig,
          "last_k needs 1 <= k <= " + std::to_string(samples->size()));
  const std::size_t first = samples->size() - k;
  std::vector<double> w(k, 1.0 / static_cast<double>(k));
  return EnsemblePredictor(std::move(samples), EnsembleMode::kLastK, first, std::move(w));
}

std::span<const ModelParams> EnsemblePredictor::members() const {
  return samples_->snapshots().subspan(first_, weights_.size());
}

std::vector<double> EnsemblePredictor::Predict(std::span<const double> x) const {
  const auto models = members();
  const MlpArchitecture& arch = models.front().architecture;
  std::vector<double> out(arch.num_classes(), 0.0);
  for (std::size_t i = 0; i < models.size(); ++i) {
    Require(models[i].architecture == arch, ErrorCode::kState,
            "ensemble members disagree on architecture");
    const std::vector<double> p = Forward(models[i], x, Mode::kEval);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += weights_[i] * p[j];
  }
  return out;
}

std::vector<double> EnsemblePredict(const EnsemblePredictor& predictor,
                                    std::span<const double> x) {
  return predictor.Predict(x);
}

Predictor MakePredictor(ModelParams params) {
  return [p = std::move(params)](std::span<const double> x) {
    return Forward(p, x, Mode::kEval);
  };
}

Predictor MakePredictor(EnsemblePredictor ensemble) {
  return [e = std::move(ensemble)](std::span<const double> x) { return e.Predict(x); };
}

double NegLogWeightedMeanExp(std::span<const double> losses,
                             std::span<const double> weights) {
  Require(!losses.empty() && losses.size() == weights.size(), ErrorCode::kShape,
          "losses and weights must be nonempty and equally long");
  // exp(-l) is largest at the smallest loss.
  const double shift = *std::min_element(losses.begin(), losses.end());
  double total = 0.0;
  double weight_total = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    total += weights[i] * std::exp(-(losses[i] - shift));
    weight_total += weights[i];
  }
  Require(total > 0.0 && std::isfinite(total), ErrorCode::kNumeric,
          "degenerate weights in log-mean-exp");
  return shift - std::log(total / weight_total);
}

double WeightedMean(std::span<const double> values, std::span<const double> weights) {
  Require(!values.empty() && values.size() == weights.size(), ErrorCode::kShape,
          "values and weights must be nonempty and equally long");
  double total = 0.0;
  double weight_total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    total += weights[i] * values[i];
    weight_total += weights[i];
  }
  return total / weight_total;
}

std::vector<double> SnapshotLosses(const PosteriorSampleSet& samples, const Sample& z,
                                   const LossBound& bound) {
  std::vector<double> losses;
  losses.reserve(samples.size());
  for (const ModelParams& theta : samples.snapshots()) {
    losses.push_back(SampleLoss(theta, z, bound));
  }
  return losses;
}

double McEstimateTp(const PosteriorSampleSet& samples, const Sample& z,
                    const LossBound& bound) {
  return NegLogWeightedMeanExp(SnapshotLosses(samples, z, bound), samples.weights());
}

double PosteriorMeanLoss(const PosteriorSampleSet& samples, const Sample& z,
                         const LossBound& bound) {
  return WeightedMean(SnapshotLosses(samples, z, bound), samples.weights());
}

}  // namespace mplkit
