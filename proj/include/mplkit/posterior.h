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

#ifndef MPLKIT_POSTERIOR_H_
#define MPLKIT_POSTERIOR_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mplkit/mlp.h"

namespace mplkit {

// Parameter snapshots recorded during a run. Entry i is the state after
// update steps[i], produced with step size step_sizes[i].
struct Trajectory {
  MlpArchitecture architecture;
  std::vector<std::int64_t> steps;
  std::vector<std::vector<double>> thetas;
  std::vector<double> step_sizes;
  std::int64_t total_steps = 0;

  void Record(std::int64_t step, std::span<const double> theta, double step_size);
};

// Post-burn-in snapshots {theta_t} with their step sizes {eps_t}.
// Immutable once built; S_L is the sum of the retained step sizes.
class PosteriorSampleSet {
 public:
  // Throws a state error if the lists are empty, differ in length, or the
  // snapshots do not share one architecture; a numeric error for a
  // non-positive step size.
  PosteriorSampleSet(std::vector<ModelParams> snapshots, std::vector<double> step_sizes,
                     std::int64_t burn_in_start = 0, std::int64_t thinning = 1);

  std::size_t size() const { return snapshots_.size(); }
  const MlpArchitecture& architecture() const { return snapshots_.front().architecture; }
  std::span<const ModelParams> snapshots() const { return snapshots_; }
  std::span<const double> step_sizes() const { return step_sizes_; }
  std::int64_t burn_in_start() const { return burn_in_start_; }
  std::int64_t thinning() const { return thinning_; }
  double total_step_size() const { return total_step_size_; }  // S_L
  double sum_squared_step_size() const;

  // eps_t / S_L for every snapshot.
  std::vector<double> weights() const;

 private:
  std::vector<ModelParams> snapshots_;
  std::vector<double> step_sizes_;
  std::int64_t burn_in_start_;
  std::int64_t thinning_;
  double total_step_size_ = 0.0;
};

// Keeps the snapshots with step index t > burn_in and (t - burn_in) % thinning
// == 0, so the final update is retained whenever it is a multiple of the
// thinning interval past burn-in. Throws a config error if burn_in is not
// below the run length or nothing is retained.
PosteriorSampleSet Collect(const Trajectory& run, std::int64_t burn_in,
                           std::int64_t thinning = 1);

enum class EnsembleMode { kWeightedAll, kLastK };

class EnsemblePredictor {
 public:
  static constexpr std::size_t kDefaultLastK = 3;

  // sum_t (eps_t / S_L) f(x, theta_t)
  static EnsemblePredictor WeightedAll(std::shared_ptr<const PosteriorSampleSet> samples);
  // Uniform average of the final k snapshots. Throws a config error if k is 0
  // or exceeds the number of snapshots.
  static EnsemblePredictor LastK(std::shared_ptr<const PosteriorSampleSet> samples,
                                 std::size_t k = kDefaultLastK);

  EnsembleMode mode() const { return mode_; }
  const PosteriorSampleSet& samples() const { return *samples_; }

  // Snapshots in use and their mixture weights (summing to 1).
  std::span<const ModelParams> members() const;
  std::span<const double> weights() const { return weights_; }

  std::vector<double> Predict(std::span<const double> x) const;

 private:
  EnsemblePredictor(std::shared_ptr<const PosteriorSampleSet> samples, EnsembleMode mode,
                    std::size_t first, std::vector<double> weights);

  std::shared_ptr<const PosteriorSampleSet> samples_;
  EnsembleMode mode_;
  std::size_t first_;
  std::vector<double> weights_;
};

std::vector<double> EnsemblePredict(const EnsemblePredictor& predictor,
                                    std::span<const double> x);

// Anything that maps a feature vector to class probabilities in eval mode.
using Predictor = std::function<std::vector<double>(std::span<const double>)>;

Predictor MakePredictor(ModelParams params);
Predictor MakePredictor(EnsemblePredictor ensemble);

// -log sum_t w_t exp(-l_t), evaluated with a max shift on the exponent.
double NegLogWeightedMeanExp(std::span<const double> losses, std::span<const double> weights);

double WeightedMean(std::span<const double> values, std::span<const double> weights);

// l(z, theta_t) for every snapshot.
std::vector<double> SnapshotLosses(const PosteriorSampleSet& samples, const Sample& z,
                                   const LossBound& bound);

// Monte-Carlo estimate of t_p(z) = -log E_{theta~p} exp(-l(z, theta)) with the
// snapshots as the posterior sample, weighted by eps_t / S_L.
double McEstimateTp(const PosteriorSampleSet& samples, const Sample& z,
                    const LossBound& bound);

// Weighted mean of l(z, theta_t); never below McEstimateTp on the same set.
double PosteriorMeanLoss(const PosteriorSampleSet& samples, const Sample& z,
                         const LossBound& bound);

}  // namespace mplkit

#endif  // MPLKIT_POSTERIOR_H_
