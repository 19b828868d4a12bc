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

#include "mplkit/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <future>
#include <numeric>
#include <utility>

#include "mplkit/error.h"
#include "mplkit/file_util.h"
#include "mplkit/snapshot_io.h"

namespace mplkit {
namespace {

std::string DefaultDataFile(const std::string& name) {
#ifdef MPLKIT_DATA_DIR
  return std::string(MPLKIT_DATA_DIR) + "/" + name;
#else
  return "data/" + name;
#endif
}

Dataset LoadSource(const ExperimentConfig& config) {
  if (config.source == "synthetic") {
    return SyntheticGaussian(config.synthetic_n_per_class, config.synthetic_dim,
                             config.synthetic_separation, config.seeds.split);
  }
  const std::string data_path =
      config.data_path.empty() ? DefaultDataFile("german.data") : config.data_path;
  const std::string schema_path =
      config.schema_path.empty() ? DefaultDataFile("german.schema.json") : config.schema_path;
  return LoadCsv(data_path, CsvSchema::Load(schema_path)).dataset;
}

std::int64_t RecordingStart(std::int64_t burn_in, std::int64_t total, std::size_t k) {
  return std::max<std::int64_t>(0, std::min(burn_in, total - static_cast<std::int64_t>(k)));
}

Predictor BuildPredictor(const ExperimentConfig& config, const ModelParams& final_params,
                         const std::shared_ptr<const PosteriorSampleSet>& samples) {
  if (IsEnsemble(config.strategy)) {
    return MakePredictor(EnsemblePredictor::LastK(samples, config.ensemble_k));
  }
  return MakePredictor(final_params);
}

const Dataset& NonmemberData(const ExperimentConfig& config, const PreparedData& data) {
  return config.nonmember_pool == NonmemberPool::kTest ? data.test : data.holdout;
}

ExperimentOutcome Evaluate(const ExperimentConfig& config, const PreparedData& data,
                           const ModelParams& final_params,
                           std::shared_ptr<const PosteriorSampleSet> samples) {
  const LossBound bound(config.loss_bound);
  const Predictor predictor = BuildPredictor(config, final_params, samples);

  ExperimentOutcome out;
  out.samples = std::move(samples);
  out.final_params = final_params;
  out.scores = ScoreSamples(predictor, data.train.samples,
                            NonmemberData(config, data).samples, bound);
  const double threshold = MeanTrainLossThreshold(predictor, data.train.samples, bound);
  out.attack = FixedThresholdAttack(out.scores, threshold);

  MetricsRecord& r = out.record;
  r.strategy = StrategyName(config.strategy);
  r.auc = out.attack.auc;
  r.f1 = out.attack.f1;
  r.acc = out.attack.accuracy;
  r.train_acc = Accuracy(predictor, data.train.samples);
  r.test_acc = Accuracy(predictor, data.test.samples);
  r.gap = r.train_acc - r.test_acc;
  r.config_hash = config.Hash();
  return out;
}

void WriteOutputs(const ExperimentConfig& config, const ExperimentOutcome& outcome,
                  const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> outputs = {"snapshots.bin", "scores.csv", "roc.csv",
                                      "attack.csv",    "metrics.csv", "metrics.json"};
  const auto path = [&](const std::string& name) { return (fs::path(dir) / name).string(); };
  WriteSnapshots(*outcome.samples, path("snapshots.bin"));
  WriteFileAtomic(path("scores.csv"), FormatScoreSet(outcome.scores));
  WriteFileAtomic(path("roc.csv"), FormatRocCurve(RocCurve(outcome.scores)));
  WriteFileAtomic(path("attack.csv"), FormatAttackReport(outcome.attack));
  const std::vector<MetricsRecord> records = {outcome.record};
  const std::vector<ExperimentConfig> configs = {config};
  EmitMetrics(records, EmitFormat::kDelimited, path("metrics.csv"));
  EmitMetrics(records, EmitFormat::kStructured, path("metrics.json"), configs);
  WriteFileAtomic(path("manifest.json"), BuildManifest(config, outputs).dump(2) + "\n");
}

}  // namespace

PreparedData PrepareData(const ExperimentConfig& config) {
  config.Validate();
  const Dataset full = LoadSource(config);
  const DataSplit split =
      Split(full, SplitSpec{config.train_count, config.holdout_count, config.test_count,
                            config.seeds.split});
  if (!config.standardize) return PreparedData{split.train, split.holdout, split.test};
  const std::vector<Dataset> others = {split.holdout, split.test};
  Standardized s = Standardize(split.train, others);
  return PreparedData{std::move(s.train), std::move(s.others[0]), std::move(s.others[1])};
}

MlpArchitecture BuildArchitecture(const ExperimentConfig& config, std::size_t input_size,
                                  std::size_t num_classes) {
  MlpArchitecture arch;
  arch.layer_sizes.push_back(input_size);
  arch.layer_sizes.insert(arch.layer_sizes.end(), config.hidden.begin(), config.hidden.end());
  arch.layer_sizes.push_back(num_classes);
  arch.activation = config.activation;
  arch.dropout_rate = config.strategy == Strategy::kDropout ? config.dropout_rate : 0.0;
  arch.Validate();
  return arch;
}

StepSchedule BuildSchedule(const ExperimentConfig& config, std::size_t dataset_size) {
  const std::int64_t per_epoch = StepsPerEpoch(static_cast<std::int64_t>(dataset_size),
                                               static_cast<std::int64_t>(config.batch_size));
  switch (config.schedule) {
    case ScheduleKind::kConstant:
      return StepSchedule::Constant(config.lr);
    case ScheduleKind::kHalving:
      return StepSchedule::Halving(config.lr, config.halving_period_epochs * per_epoch);
    case ScheduleKind::kPolynomial:
      return StepSchedule::Polynomial(
          config.lr * std::pow(config.poly_offset, config.poly_gamma), config.poly_offset,
          config.poly_gamma);
  }
  return StepSchedule::Constant(config.lr);
}

TrainingResult Train(const ExperimentConfig& config, std::span<const Sample> train,
                     std::size_t num_classes, std::size_t input_size) {
  config.Validate();
  Require(train.size() >= config.batch_size, ErrorCode::kConfig,
          "training set is smaller than the batch size");
  const MlpArchitecture arch = BuildArchitecture(config, input_size, num_classes);
  const LossBound bound(config.loss_bound);

  OptimizerConfig oc;
  oc.kind = StrategyOptimizer(config.strategy);
  oc.schedule = BuildSchedule(config, train.size());
  oc.prior = GaussianPrior{config.prior_variance};
  oc.decay = config.decay;
  oc.damping = config.damping;
  oc.noise_seed = config.seeds.noise;
  oc.baseline_gradient = config.baseline_gradient;

  TrainingResult result;
  result.final_params = InitParams(arch, config.seeds.init);
  Optimizer optimizer(oc, result.final_params.theta.size());

  const std::int64_t per_epoch = StepsPerEpoch(static_cast<std::int64_t>(train.size()),
                                               static_cast<std::int64_t>(config.batch_size));
  const std::int64_t total = per_epoch * static_cast<std::int64_t>(config.epochs);
  result.burn_in = static_cast<std::int64_t>(config.burn_in_fraction * static_cast<double>(total));
  const std::int64_t record_from = RecordingStart(result.burn_in, total, config.ensemble_k);
  result.trajectory.architecture = arch;
  result.trajectory.total_steps = total;

  Rng order_rng = MakeRng(config.seeds.data_order);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<Sample> batch;
  batch.reserve(config.batch_size);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), order_rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(train[order[i]]);
      const double eps = optimizer.current_step_size();
      const Seed dropout_seed = order_rng();
      TrainingStep(result.final_params, optimizer, batch, train.size(), bound, dropout_seed);
      const std::int64_t t = optimizer.steps_taken();
      if (t > record_from) result.trajectory.Record(t, result.final_params.theta, eps);
    }
  }
  return result;
}

ExperimentOutcome RunExperimentDetailed(const ExperimentConfig& config,
                                        const PreparedData& data,
                                        const std::optional<std::string>& output_dir) {
  const auto start = std::chrono::steady_clock::now();
  TrainingResult trained = Train(config, data.train.samples, data.train.class_count,
                                 data.train.feature_count());
  const std::int64_t from = RecordingStart(trained.burn_in, trained.trajectory.total_steps,
                                           config.ensemble_k);
  auto samples =
      std::make_shared<const PosteriorSampleSet>(Collect(trained.trajectory, from, config.thinning));
  ExperimentOutcome outcome = Evaluate(config, data, trained.final_params, std::move(samples));
  outcome.record.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (output_dir) WriteOutputs(config, outcome, *output_dir);
  return outcome;
}

MetricsRecord RunExperiment(const ExperimentConfig& config,
                            const std::optional<std::string>& output_dir) {
  return RunExperimentDetailed(config, PrepareData(config), output_dir).record;
}

std::vector<MetricsRecord> CompareStrategies(std::span<const ExperimentConfig> configs,
                                             std::size_t jobs) {
  Require(!configs.empty(), ErrorCode::kConfig, "compare needs at least one config");
  const ExperimentConfig& first = configs.front();
  for (const ExperimentConfig& c : configs) {
    Require(c.source == first.source && c.data_path == first.data_path &&
                c.schema_path == first.schema_path && c.standardize == first.standardize &&
                c.train_count == first.train_count && c.holdout_count == first.holdout_count &&
                c.test_count == first.test_count && c.seeds.split == first.seeds.split &&
                c.synthetic_n_per_class == first.synthetic_n_per_class &&
                c.synthetic_dim == first.synthetic_dim &&
                c.synthetic_separation == first.synthetic_separation,
            ErrorCode::kConfig, "compared configs must share data and split seed");
  }
  const PreparedData data = PrepareData(first);
  std::vector<MetricsRecord> records(configs.size());
  jobs = std::max<std::size_t>(1, jobs);
  for (std::size_t begin = 0; begin < configs.size(); begin += jobs) {
    const std::size_t end = std::min(configs.size(), begin + jobs);
    std::vector<std::future<MetricsRecord>> running;
    for (std::size_t i = begin; i < end; ++i) {
      running.push_back(std::async(std::launch::async, [&configs, &data, i] {
        return RunExperimentDetailed(configs[i], data).record;
      }));
    }
    for (std::size_t i = begin; i < end; ++i) records[i] = running[i - begin].get();
  }
  return records;
}

ExperimentOutcome AttackSnapshots(const ExperimentConfig& config,
                                  const PosteriorSampleSet& samples) {
  const PreparedData data = PrepareData(config);
  Require(samples.architecture().input_size() == data.train.feature_count() &&
              samples.architecture().num_classes() == data.train.class_count,
          ErrorCode::kShape, "snapshot architecture does not match the dataset");
  auto shared = std::make_shared<const PosteriorSampleSet>(samples);
  const ModelParams last = samples.snapshots().back();
  return Evaluate(config, data, last, std::move(shared));
}

std::vector<MplReport> RunAudit(const ExperimentConfig& config) {
  const PreparedData data = PrepareData(config);
  const LossBound bound(config.loss_bound);
  const std::size_t n_in = data.train.feature_count();
  const std::size_t k = data.train.class_count;

  const ExperimentOutcome target = RunExperimentDetailed(config, data);

  ExperimentConfig shadow = config;
  shadow.strategy = Strategy::kSgld;
  shadow.seeds = SeedBundle::FromMaster(DeriveSeed(config.seeds.noise, 17));
  shadow.seeds.split = config.seeds.split;
  const std::size_t shadow_n = std::max<std::size_t>(
      config.batch_size,
      static_cast<std::size_t>(config.shadow_member_fraction *
                               static_cast<double>(data.train.size())));
  Require(shadow_n <= data.train.size(), ErrorCode::kConfig,
          "audit shadow set exceeds the training set");
  std::span<const Sample> shadow_train(data.train.samples.data(), shadow_n);
  const TrainingResult ref = Train(shadow, shadow_train, k, n_in);
  const PosteriorSampleSet reference =
      Collect(ref.trajectory, RecordingStart(ref.burn_in, ref.trajectory.total_steps, 1),
              shadow.thinning);

  const bool ensemble = IsEnsemble(config.strategy);
  const Predictor predictor = BuildPredictor(config, target.final_params, target.samples);
  std::vector<MplReport> reports;
  const auto probe = [&](const Sample& z, const std::string& id) {
    double score = 0.0;
    if (ensemble) {
      const EnsemblePredictor e = EnsemblePredictor::LastK(target.samples, config.ensemble_k);
      std::vector<double> losses;
      for (const ModelParams& m : e.members()) losses.push_back(SampleLoss(m, z, bound));
      const double mean_loss = WeightedMean(losses, e.weights());
      score = EnsembleMeasureScore(mean_loss, NllLoss(predictor(z.x), z.y, bound));
    } else {
      score = MeasureScore(McEstimateTp(reference, z, bound),
                           NllLoss(predictor(z.x), z.y, bound));
    }
    reports.push_back(MakeMplReport(id, score, config.lambda));
  };
  for (std::size_t i = 0; i < data.train.size(); ++i) {
    probe(data.train.samples[i], "member:" + std::to_string(i));
  }
  for (std::size_t i = 0; i < data.test.size(); ++i) {
    probe(data.test.samples[i], "nonmember:" + std::to_string(i));
  }
  return reports;
}

}  // namespace mplkit
