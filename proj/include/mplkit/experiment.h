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

#ifndef MPLKIT_EXPERIMENT_H_
#define MPLKIT_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mplkit/attack.h"
#include "mplkit/dataset.h"
#include "mplkit/mlp.h"
#include "mplkit/optimizer.h"
#include "mplkit/posterior.h"
#include "mplkit/privacy.h"
#include "mplkit/random.h"
#include "mplkit/schedule.h"

namespace mplkit {

enum class Strategy {
  kSgd,
  kSgdEnsemble,
  kDropout,
  kRmsprop,
  kSgld,
  kSgldEnsemble,
  kPsgld,
  kPsgldEnsemble,
};

std::string StrategyName(Strategy s);
Strategy ParseStrategy(const std::string& name);
OptimizerKind StrategyOptimizer(Strategy s);
bool IsEnsemble(Strategy s);

// The four seeds of a run. FromMaster derives them as
//   split = DeriveSeed(m, 0), init = DeriveSeed(m, 1),
//   data_order = DeriveSeed(m, 2), noise = DeriveSeed(m, 3).
struct SeedBundle {
  Seed split = 1;
  Seed init = 2;
  Seed data_order = 3;
  Seed noise = 4;

  static SeedBundle FromMaster(Seed master);
  bool operator==(const SeedBundle&) const = default;
};

enum class NonmemberPool { kTest, kHoldout };

struct ExperimentConfig {
  // dataset
  std::string source = "german";  // german | csv | synthetic
  std::string data_path;          // empty: the shipped German Credit file
  std::string schema_path;        // empty: the shipped German Credit schema
  bool standardize = true;
  std::size_t synthetic_n_per_class = 500;
  std::size_t synthetic_dim = 2;
  double synthetic_separation = 6.0;

  std::size_t train_count = 400;
  std::size_t holdout_count = 300;
  std::size_t test_count = 300;

  // model
  std::vector<std::size_t> hidden = {64, 32};
  Activation activation = Activation::kRelu;
  double dropout_rate = 0.3;  // used by the dropout strategy only

  Strategy strategy = Strategy::kSgld;

  // optimizer
  double lr = 1e-3;
  ScheduleKind schedule = ScheduleKind::kConstant;
  std::int64_t halving_period_epochs = 5;
  double poly_offset = 1.0;
  double poly_gamma = 0.55;
  double prior_variance = 1.0;
  std::size_t batch_size = 32;
  std::size_t epochs = 30;
  double burn_in_fraction = 0.5;
  std::int64_t thinning = 1;
  std::size_t ensemble_k = EnsemblePredictor::kDefaultLastK;
  double decay = 0.99;
  double damping = 1e-5;
  BaselineGradient baseline_gradient = BaselineGradient::kScaled;

  double loss_bound = LossBound::kDefault;
  SeedBundle seeds;
  double lambda = ShadowDataset::kDefaultLambda;
  NonmemberPool nonmember_pool = NonmemberPool::kTest;
  double shadow_member_fraction = 0.5;  // audit: share of train used as S_T

  // Every field, nested by section. Unknown keys in FromJson are config
  // errors; missing keys keep their defaults.
  nlohmann::json ToJson() const;
  static ExperimentConfig FromJson(const nlohmann::json& j);
  static ExperimentConfig Load(const std::string& path);

  // Applies "section.key=value" (value parsed as JSON, else taken as a
  // string) on top of this config.
  ExperimentConfig WithOverride(const std::string& assignment) const;

  void Validate() const;

  // FNV-1a of the canonical JSON form, as 16 hex digits.
  std::string Hash() const;
};

struct MetricsRecord {
  std::string strategy;
  double auc = 0.0;
  double f1 = 0.0;
  double acc = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  double gap = 0.0;
  double runtime_s = 0.0;
  std::string config_hash;

  // Equality over everything except runtime.
  bool SameMetrics(const MetricsRecord& other) const;
};

// Standardized train/holdout/test splits for a config.
struct PreparedData {
  Dataset train;
  Dataset holdout;
  Dataset test;
};

PreparedData PrepareData(const ExperimentConfig& config);

MlpArchitecture BuildArchitecture(const ExperimentConfig& config, std::size_t input_size,
                                  std::size_t num_classes);
StepSchedule BuildSchedule(const ExperimentConfig& config, std::size_t dataset_size);

struct TrainingResult {
  ModelParams final_params;
  Trajectory trajectory;  // snapshots after the recording start
  std::int64_t burn_in = 0;
};

// Trains on `train` following the config's strategy. Snapshots are recorded
// for every update after min(burn-in, total - ensemble_k).
TrainingResult Train(const ExperimentConfig& config, std::span<const Sample> train,
                     std::size_t num_classes, std::size_t input_size);

struct ExperimentOutcome {
  MetricsRecord record;
  std::shared_ptr<const PosteriorSampleSet> samples;  // post-burn-in snapshots
  ModelParams final_params;
  AttackScoreSet scores;
  AttackReport attack;
};

// Trains, builds the strategy's predictor and runs the threshold attack
// (training members vs the configured nonmember pool). When output_dir is
// set, snapshots, scores, ROC points, metrics and a manifest are written
// there.
ExperimentOutcome RunExperimentDetailed(const ExperimentConfig& config,
                                        const PreparedData& data,
                                        const std::optional<std::string>& output_dir = {});
MetricsRecord RunExperiment(const ExperimentConfig& config,
                            const std::optional<std::string>& output_dir = {});

// Runs every config on one shared split. Throws a config error if the
// configs disagree on data source, split sizes or split seed.
std::vector<MetricsRecord> CompareStrategies(std::span<const ExperimentConfig> configs,
                                             std::size_t jobs = 1);

// Evaluates an existing snapshot file against the config's data.
ExperimentOutcome AttackSnapshots(const ExperimentConfig& config,
                                  const PosteriorSampleSet& samples);

// Per-sample leakage of the configured target against an attacker whose
// reference posterior is an SGLD run on the first shadow_member_fraction of
// the training set. Probes are all training and test samples.
std::vector<MplReport> RunAudit(const ExperimentConfig& config);

enum class EmitFormat { kDelimited, kStructured };

// Delimited columns: strategy,auc,f1,acc,train,test,gap,runtime_s,config_hash
std::string FormatMetrics(std::span<const MetricsRecord> records, EmitFormat format,
                          std::span<const ExperimentConfig> configs = {});
std::vector<MetricsRecord> ParseMetrics(const std::string& text, EmitFormat format);
void EmitMetrics(std::span<const MetricsRecord> records, EmitFormat format,
                 const std::string& path, std::span<const ExperimentConfig> configs = {});

nlohmann::json BuildManifest(const ExperimentConfig& config,
                             const std::vector<std::string>& outputs);

std::string CodeVersion();

}  // namespace mplkit

#endif  // MPLKIT_EXPERIMENT_H_
