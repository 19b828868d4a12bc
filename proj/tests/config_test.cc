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


#include <cmath>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mplkit/error.h"
#include "mplkit/experiment.h"
#include "mplkit/file_util.h"
#include "mplkit/snapshot_io.h"

namespace mplkit {
namespace {

using nlohmann::json;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

ExperimentConfig SmallSynthetic(Strategy strategy = Strategy::kSgd) {
  ExperimentConfig c;
  c.source = "synthetic";
  c.synthetic_n_per_class = 150;
  c.synthetic_dim = 2;
  c.synthetic_separation = 6.0;
  c.train_count = 100;
  c.holdout_count = 50;
  c.test_count = 150;
  c.hidden = {8};
  c.epochs = 10;
  c.strategy = strategy;
  return c;
}

TEST(ConfigTest, JsonRoundTrip) {
  ExperimentConfig c;
  c.hidden = {16, 8, 4};
  c.strategy = Strategy::kPsgldEnsemble;
  c.schedule = ScheduleKind::kPolynomial;
  c.seeds = SeedBundle::FromMaster(77);
  c.nonmember_pool = NonmemberPool::kHoldout;
  const ExperimentConfig back = ExperimentConfig::FromJson(c.ToJson());
  EXPECT_EQ(back.ToJson(), c.ToJson());
  EXPECT_EQ(back.Hash(), c.Hash());
  EXPECT_EQ(back.seeds, c.seeds);
}

TEST(ConfigTest, MissingKeysKeepDefaults) {
  const ExperimentConfig c = ExperimentConfig::FromJson(json::parse(R"({"optimizer": {"lr": 0.01}})"));
  EXPECT_EQ(c.lr, 0.01);
  EXPECT_EQ(c.batch_size, 32u);
  EXPECT_EQ(c.epochs, 30u);
  EXPECT_EQ(c.prior_variance, 1.0);
  EXPECT_EQ(c.ensemble_k, 3u);
  EXPECT_EQ(c.schedule, ScheduleKind::kConstant);
}

TEST(ConfigTest, RejectsUnknownAndInvalid) {
  EXPECT_EQ(CodeOf([] { ExperimentConfig::FromJson(json::parse(R"({"optimiser": {}})")); }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { ExperimentConfig::FromJson(json::parse(R"({"optimizer": {"momentum": 1}})")); }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { ExperimentConfig::FromJson(json::parse(R"({"optimizer": {"lr": "fast"}})")); }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { ExperimentConfig::FromJson(json::parse(R"({"lambda": 1.0})")); }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { ExperimentConfig::FromJson(json::parse(R"({"strategy": "adam"})")); }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { ExperimentConfig::FromJson(json::parse(R"({"loss_bound": 0.5})")); }),
            ErrorCode::kConfig);
}

TEST(ConfigTest, LoadReportsParseErrors) {
  const auto path = std::filesystem::temp_directory_path() / "mplkit_bad_config.json";
  WriteFileAtomic(path.string(), "{\"strategy\": ");
  EXPECT_EQ(CodeOf([&] { ExperimentConfig::Load(path.string()); }), ErrorCode::kParse);
  std::filesystem::remove(path);
  EXPECT_EQ(CodeOf([] { ExperimentConfig::Load("/nonexistent/config.json"); }), ErrorCode::kIo);
}

TEST(ConfigTest, Overrides) {
  ExperimentConfig c;
  c = c.WithOverride("optimizer.lr=0.05");
  c = c.WithOverride("strategy=sgld_ensemble");
  c = c.WithOverride("model.hidden=[12,6]");
  c = c.WithOverride("seeds.noise=99");
  EXPECT_EQ(c.lr, 0.05);
  EXPECT_EQ(c.strategy, Strategy::kSgldEnsemble);
  EXPECT_EQ(c.hidden, (std::vector<std::size_t>{12, 6}));
  EXPECT_EQ(c.seeds.noise, 99u);
  EXPECT_EQ(CodeOf([&] { c.WithOverride("optimizer.lrr=1"); }), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([&] { c.WithOverride("novalue"); }), ErrorCode::kConfig);
}

TEST(ConfigTest, HashIsSemantic) {
  const json a = json::parse(R"({"optimizer": {"lr": 0.01, "epochs": 5}, "lambda": 0.4})");
  const json b = json::parse(R"({"lambda": 0.4, "optimizer": {"epochs": 5, "lr": 0.01}})");
  EXPECT_EQ(ExperimentConfig::FromJson(a).Hash(), ExperimentConfig::FromJson(b).Hash());
  EXPECT_EQ(ExperimentConfig{}.Hash(), ExperimentConfig::FromJson(json::object()).Hash());
  EXPECT_NE(ExperimentConfig{}.Hash(), ExperimentConfig{}.WithOverride("lambda=0.3").Hash());
  EXPECT_EQ(ExperimentConfig{}.Hash().size(), 16u);
}

TEST(ConfigTest, SeedBundleDerivation) {
  const SeedBundle s = SeedBundle::FromMaster(5);
  EXPECT_EQ(s.split, DeriveSeed(5, 0));
  EXPECT_EQ(s.init, DeriveSeed(5, 1));
  EXPECT_EQ(s.data_order, DeriveSeed(5, 2));
  EXPECT_EQ(s.noise, DeriveSeed(5, 3));
  EXPECT_NE(s.split, s.init);
}

TEST(ConfigTest, StrategyTable) {
  for (Strategy s : {Strategy::kSgd, Strategy::kSgdEnsemble, Strategy::kDropout,
                     Strategy::kRmsprop, Strategy::kSgld, Strategy::kSgldEnsemble,
                     Strategy::kPsgld, Strategy::kPsgldEnsemble}) {
    EXPECT_EQ(ParseStrategy(StrategyName(s)), s);
  }
  EXPECT_EQ(StrategyOptimizer(Strategy::kDropout), OptimizerKind::kSgd);
  EXPECT_EQ(StrategyOptimizer(Strategy::kPsgldEnsemble), OptimizerKind::kPsgld);
  EXPECT_TRUE(IsEnsemble(Strategy::kSgdEnsemble));
  EXPECT_FALSE(IsEnsemble(Strategy::kSgld));
}

TEST(ExperimentTest, ArchitectureAndSchedule) {
  ExperimentConfig c;
  EXPECT_EQ(BuildArchitecture(c, 61, 2).layer_sizes, (std::vector<std::size_t>{61, 64, 32, 2}));
  EXPECT_EQ(BuildArchitecture(c, 61, 2).dropout_rate, 0.0);
  c.strategy = Strategy::kDropout;
  EXPECT_EQ(BuildArchitecture(c, 61, 2).dropout_rate, 0.3);
  c.schedule = ScheduleKind::kHalving;
  const StepSchedule h = BuildSchedule(c, 400);
  EXPECT_EQ(h.period_steps, 65);
  EXPECT_EQ(h.At(64), 1e-3);
  EXPECT_EQ(h.At(65), 5e-4);
  c.schedule = ScheduleKind::kPolynomial;
  EXPECT_NEAR(BuildSchedule(c, 400).At(0), 1e-3, 1e-18);
}

TEST(ExperimentTest, TrainingRecordsPostBurnInSteps) {
  const ExperimentConfig c = SmallSynthetic(Strategy::kSgld);
  const PreparedData data = PrepareData(c);
  const TrainingResult r = Train(c, data.train.samples, 2, 2);
  const std::int64_t total = 4 * 10;
  EXPECT_EQ(r.trajectory.total_steps, total);
  EXPECT_EQ(r.burn_in, total / 2);
  EXPECT_EQ(r.trajectory.steps.front(), total / 2 + 1);
  EXPECT_EQ(r.trajectory.steps.back(), total);
  EXPECT_EQ(r.trajectory.thetas.back(), r.final_params.theta);
}

TEST(ExperimentTest, DeterministicMetrics) {
  for (Strategy s : {Strategy::kSgd, Strategy::kDropout, Strategy::kSgldEnsemble,
                     Strategy::kPsgld}) {
    const ExperimentConfig c = SmallSynthetic(s);
    const MetricsRecord a = RunExperiment(c);
    const MetricsRecord b = RunExperiment(c);
    EXPECT_TRUE(a.SameMetrics(b)) << StrategyName(s);
    EXPECT_NEAR(a.gap, a.train_acc - a.test_acc, 1e-12);
    EXPECT_EQ(a.strategy, StrategyName(s));
  }
}

TEST(ExperimentTest, SyntheticEasyTask) {
  double auc = 0.0;
  for (Seed master = 1; master <= 5; ++master) {
    ExperimentConfig c = SmallSynthetic(Strategy::kSgd);
    c.synthetic_n_per_class = 500;
    c.train_count = 400;
    c.holdout_count = 300;
    c.test_count = 300;
    c.epochs = 30;
    c.seeds = SeedBundle::FromMaster(master);
    const MetricsRecord r = RunExperiment(c);
    EXPECT_GE(r.test_acc, 0.95);
    auc += r.auc / 5.0;
  }
  EXPECT_NEAR(auc, 0.5, 0.1);
}

TEST(ExperimentTest, GermanCreditSgdMemorizes) {
  ExperimentConfig c;
  c.strategy = Strategy::kSgd;
  const MetricsRecord r = RunExperiment(c);
  EXPECT_GE(r.train_acc, 0.95);
  EXPECT_GE(r.gap, 0.15);
}

TEST(ExperimentTest, CompareSharesSplitAndChecksSeeds) {
  std::vector<ExperimentConfig> rows = {SmallSynthetic(Strategy::kSgd),
                                        SmallSynthetic(Strategy::kSgld)};
  const auto records = CompareStrategies(rows, 2);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_TRUE(records[0].SameMetrics(RunExperiment(rows[0])));
  EXPECT_TRUE(records[1].SameMetrics(RunExperiment(rows[1])));
  EXPECT_EQ(CompareStrategies(std::span(rows).first(1)).size(), 1u);
  rows[1].seeds.split = 12345;
  EXPECT_EQ(CodeOf([&] { CompareStrategies(rows); }), ErrorCode::kConfig);
}

TEST(ExperimentTest, OutputsAndSnapshotReplay) {
  const auto dir = std::filesystem::temp_directory_path() / "mplkit_experiment_test";
  std::filesystem::remove_all(dir);
  const ExperimentConfig c = SmallSynthetic(Strategy::kSgldEnsemble);
  const MetricsRecord r = RunExperiment(c, dir.string());
  for (const char* name : {"snapshots.bin", "scores.csv", "roc.csv", "attack.csv",
                           "metrics.csv", "metrics.json", "manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
  }
  const json manifest = json::parse(ReadFile((dir / "manifest.json").string()));
  EXPECT_EQ(manifest.at("config_hash"), c.Hash());
  EXPECT_EQ(manifest.at("code_version"), CodeVersion());
  EXPECT_EQ(ExperimentConfig::FromJson(manifest.at("config")).Hash(), c.Hash());
  EXPECT_EQ(manifest.at("seeds").at("noise").get<Seed>(), c.seeds.noise);

  const auto parsed = ParseMetrics(ReadFile((dir / "metrics.csv").string()), EmitFormat::kDelimited);
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_TRUE(parsed[0].SameMetrics(r));

  const PosteriorSampleSet samples = ReadSnapshots((dir / "snapshots.bin").string());
  EXPECT_TRUE(AttackSnapshots(c, samples).record.SameMetrics(r));
  std::filesystem::remove_all(dir);
}

TEST(EmitTest, RoundTripsBothFormats) {
  std::vector<MetricsRecord> records = {
      {"sgd", 0.677, 0.7, 0.65, 1.0, 0.734, 0.266, 1.25, "00000000deadbeef"},
      {"sgld", 1.0 / 3.0, 0.1, 0.2, 0.3, 0.4, -0.1, 0.5, "0123456789abcdef"}};
  const std::vector<ExperimentConfig> configs = {ExperimentConfig{}, ExperimentConfig{}};
  for (EmitFormat f : {EmitFormat::kDelimited, EmitFormat::kStructured}) {
    const auto back = ParseMetrics(FormatMetrics(records, f, configs), f);
    ASSERT_EQ(back.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_TRUE(back[i].SameMetrics(records[i]));
      EXPECT_EQ(back[i].runtime_s, records[i].runtime_s);
    }
  }
  const json j = json::parse(FormatMetrics(records, EmitFormat::kStructured, configs));
  EXPECT_EQ(j.at("configs").size(), 2u);
}

TEST(EmitTest, ColumnOrderAndEmptyTable) {
  const std::string empty = FormatMetrics({}, EmitFormat::kDelimited);
  EXPECT_EQ(empty, "strategy,auc,f1,acc,train,test,gap,runtime_s,config_hash\n");
  EXPECT_TRUE(ParseMetrics(empty, EmitFormat::kDelimited).empty());
  EXPECT_EQ(CodeOf([] { EmitMetrics({}, EmitFormat::kDelimited, "/proc/mplkit/metrics.csv"); }),
            ErrorCode::kIo);
}

TEST(AuditTest, ReportsEveryProbe) {
  for (Strategy s : {Strategy::kSgld, Strategy::kSgldEnsemble}) {
    const ExperimentConfig c = SmallSynthetic(s);
    const auto reports = RunAudit(c);
    ASSERT_EQ(reports.size(), c.train_count + c.test_count);
    EXPECT_EQ(reports.front().sample_id, "member:0");
    EXPECT_EQ(reports.back().sample_id, "nonmember:149");
    for (const MplReport& r : reports) {
      EXPECT_LE(r.mpl, r.lipschitz_bound + 1e-12);
      EXPECT_LE(r.mpl, 1.0 - c.lambda + 1e-12);
      EXPECT_TRUE(std::isfinite(r.score));
    }
  }
}

}  // namespace
}  // namespace mplkit
