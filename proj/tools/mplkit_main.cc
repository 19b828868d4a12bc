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


#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mplkit/error.h"
#include "mplkit/experiment.h"
#include "mplkit/file_util.h"
#include "mplkit/schedule.h"
#include "mplkit/snapshot_io.h"
#include "mplkit/text_util.h"

namespace {

using mplkit::ErrorCode;
using mplkit::ExperimentConfig;

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitParse = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitIo = 5;

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kSchedule:
      return kExitConfig;
    case ErrorCode::kParse:
    case ErrorCode::kEncoding:
      return kExitParse;
    case ErrorCode::kNumeric:
      return kExitNumeric;
    case ErrorCode::kIo:
      return kExitIo;
    default:
      return kExitOther;
  }
}

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed_bundle;
  std::string strategy;
};

void AddCommon(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("-c,--config", opts.config_path, "JSON config file");
  cmd->add_option("--set", opts.overrides, "override a config field, e.g. optimizer.lr=0.01");
  cmd->add_option("--seed-bundle", opts.seed_bundle,
                  "derive the split/init/data_order/noise seeds from one master seed");
  cmd->add_option("--strategy", opts.strategy, "strategy name");
}

ExperimentConfig Resolve(const CommonOptions& opts) {
  ExperimentConfig config =
      opts.config_path.empty() ? ExperimentConfig{} : ExperimentConfig::Load(opts.config_path);
  for (const std::string& o : opts.overrides) config = config.WithOverride(o);
  if (opts.seed_bundle) config.seeds = mplkit::SeedBundle::FromMaster(*opts.seed_bundle);
  if (!opts.strategy.empty()) config.strategy = mplkit::ParseStrategy(opts.strategy);
  config.Validate();
  return config;
}

std::vector<mplkit::Strategy> ParseStrategyList(const std::string& list) {
  std::vector<mplkit::Strategy> out;
  for (const std::string& name : mplkit::SplitFields(list, ',')) {
    out.push_back(mplkit::ParseStrategy(mplkit::Trim(name)));
  }
  return out;
}

void PrintSchedule(const mplkit::ScheduleReport& r, std::int64_t horizon) {
  std::cout << "horizon," << horizon << "\n"
            << "monotone," << (r.monotone ? "true" : "false") << "\n"
            << "constant_step," << (r.constant_step ? "true" : "false") << "\n"
            << "sum," << mplkit::FormatDouble(r.sum) << "\n"
            << "sum_sq," << mplkit::FormatDouble(r.sum_sq) << "\n"
            << "ratio," << mplkit::FormatDouble(r.ratio) << "\n"
            << "half_ratio," << mplkit::FormatDouble(r.half_ratio) << "\n"
            << "ratio_decreasing," << (r.ratio_decreasing ? "true" : "false") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mplkit: SGLD training and membership privacy leakage"};
  app.require_subcommand(1);

  CommonOptions train_opts;
  std::string train_out;
  auto* train = app.add_subcommand("train", "train one strategy and attack it");
  AddCommon(train, train_opts);
  train->add_option("-o,--out", train_out, "output directory");

  CommonOptions attack_opts;
  std::string attack_snapshots;
  std::string attack_out;
  auto* attack = app.add_subcommand("attack", "attack a saved snapshot file");
  AddCommon(attack, attack_opts);
  attack->add_option("--snapshots", attack_snapshots, "snapshot file")->required();
  attack->add_option("-o,--out", attack_out, "output directory");

  CommonOptions compare_opts;
  std::string compare_strategies = "sgd,sgd_ensemble,dropout,rmsprop,sgld,sgld_ensemble,psgld,psgld_ensemble";
  std::string compare_out;
  std::size_t jobs = 1;
  auto* compare = app.add_subcommand("compare", "compare strategies on one shared split");
  AddCommon(compare, compare_opts);
  compare->add_option("--strategies", compare_strategies, "comma separated strategy list");
  compare->add_option("-j,--jobs", jobs, "rows run concurrently");
  compare->add_option("-o,--out", compare_out, "output directory");

  CommonOptions audit_opts;
  std::string audit_out;
  auto* audit = app.add_subcommand("audit", "per-sample membership leakage reports");
  AddCommon(audit, audit_opts);
  audit->add_option("-o,--out", audit_out, "report file (default stdout)");

  CommonOptions schedule_opts;
  std::int64_t horizon = 0;
  auto* schedule = app.add_subcommand("validate-schedule", "check a step-size schedule");
  AddCommon(schedule, schedule_opts);
  schedule->add_option("--horizon", horizon, "number of steps (default: full training run)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*train) {
      const ExperimentConfig config = Resolve(train_opts);
      std::optional<std::string> out;
      if (!train_out.empty()) out = train_out;
      const mplkit::MetricsRecord record = mplkit::RunExperiment(config, out);
      const std::vector<mplkit::MetricsRecord> rows = {record};
      std::cout << mplkit::FormatMetrics(rows, mplkit::EmitFormat::kDelimited);
    } else if (*attack) {
      const ExperimentConfig config = Resolve(attack_opts);
      const mplkit::PosteriorSampleSet samples = mplkit::ReadSnapshots(attack_snapshots);
      const mplkit::ExperimentOutcome outcome = mplkit::AttackSnapshots(config, samples);
      if (!attack_out.empty()) {
        const auto path = [&](const char* name) {
          return (std::filesystem::path(attack_out) / name).string();
        };
        mplkit::WriteFileAtomic(path("scores.csv"), mplkit::FormatScoreSet(outcome.scores));
        mplkit::WriteFileAtomic(path("attack.csv"), mplkit::FormatAttackReport(outcome.attack));
      }
      std::cout << mplkit::FormatAttackReport(outcome.attack);
    } else if (*compare) {
      const ExperimentConfig base = Resolve(compare_opts);
      std::vector<ExperimentConfig> configs;
      for (mplkit::Strategy s : ParseStrategyList(compare_strategies)) {
        ExperimentConfig c = base;
        c.strategy = s;
        configs.push_back(c);
      }
      const auto records = mplkit::CompareStrategies(configs, jobs);
      if (!compare_out.empty()) {
        const auto path = [&](const char* name) {
          return (std::filesystem::path(compare_out) / name).string();
        };
        mplkit::EmitMetrics(records, mplkit::EmitFormat::kDelimited, path("metrics.csv"));
        mplkit::EmitMetrics(records, mplkit::EmitFormat::kStructured, path("metrics.json"),
                            configs);
        mplkit::WriteFileAtomic(path("manifest.json"),
                                mplkit::BuildManifest(base, {"metrics.csv", "metrics.json"})
                                        .dump(2) + "\n");
      }
      std::cout << mplkit::FormatMetrics(records, mplkit::EmitFormat::kDelimited);
    } else if (*audit) {
      const ExperimentConfig config = Resolve(audit_opts);
      const std::string table = mplkit::FormatMplReports(mplkit::RunAudit(config));
      if (audit_out.empty()) {
        std::cout << table;
      } else {
        mplkit::WriteFileAtomic(audit_out, table);
      }
    } else if (*schedule) {
      const ExperimentConfig config = Resolve(schedule_opts);
      const std::int64_t per_epoch =
          mplkit::StepsPerEpoch(static_cast<std::int64_t>(config.train_count),
                                static_cast<std::int64_t>(config.batch_size));
      if (horizon == 0) horizon = per_epoch * static_cast<std::int64_t>(config.epochs);
      const auto sched = mplkit::BuildSchedule(config, config.train_count);
      PrintSchedule(mplkit::ValidateSchedule(sched, horizon), horizon);
    }
  } catch (const mplkit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOk;
}
