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

#include <cstdint>
#include <cstdio>
#include <string>

#include "mplkit/error.h"
#include "mplkit/experiment.h"
#include "mplkit/file_util.h"
#include "mplkit/text_util.h"

namespace mplkit {
namespace {

using nlohmann::json;

void CheckKnownKeys(const json& input, const json& reference, const std::string& path) {
  Require(input.is_object(), ErrorCode::kConfig,
          "config section '" + (path.empty() ? std::string("<root>") : path) +
              "' must be an object");
  for (const auto& [key, value] : input.items()) {
    const std::string where = path.empty() ? key : path + "." + key;
    Require(reference.contains(key), ErrorCode::kConfig, "unknown config key '" + where + "'");
    if (reference.at(key).is_object()) CheckKnownKeys(value, reference.at(key), where);
  }
}

std::string NonmemberPoolName(NonmemberPool p) {
  return p == NonmemberPool::kTest ? "test" : "holdout";
}

NonmemberPool ParseNonmemberPool(const std::string& name) {
  if (name == "test") return NonmemberPool::kTest;
  if (name == "holdout") return NonmemberPool::kHoldout;
  Fail(ErrorCode::kConfig, "unknown nonmember pool '" + name + "'");
}

}  // namespace

std::string StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kSgd: return "sgd";
    case Strategy::kSgdEnsemble: return "sgd_ensemble";
    case Strategy::kDropout: return "dropout";
    case Strategy::kRmsprop: return "rmsprop";
    case Strategy::kSgld: return "sgld";
    case Strategy::kSgldEnsemble: return "sgld_ensemble";
    case Strategy::kPsgld: return "psgld";
    case Strategy::kPsgldEnsemble: return "psgld_ensemble";
  }
  return "sgd";
}

Strategy ParseStrategy(const std::string& name) {
  for (Strategy s : {Strategy::kSgd, Strategy::kSgdEnsemble, Strategy::kDropout,
                     Strategy::kRmsprop, Strategy::kSgld, Strategy::kSgldEnsemble,
                     Strategy::kPsgld, Strategy::kPsgldEnsemble}) {
    if (StrategyName(s) == name) return s;
  }
  Fail(ErrorCode::kConfig, "unknown strategy '" + name + "'");
}

OptimizerKind StrategyOptimizer(Strategy s) {
  switch (s) {
    case Strategy::kSgd:
    case Strategy::kSgdEnsemble:
    case Strategy::kDropout:
      return OptimizerKind::kSgd;
    case Strategy::kRmsprop:
      return OptimizerKind::kRmsprop;
    case Strategy::kSgld:
    case Strategy::kSgldEnsemble:
      return OptimizerKind::kSgld;
    case Strategy::kPsgld:
    case Strategy::kPsgldEnsemble:
      return OptimizerKind::kPsgld;
  }
  return OptimizerKind::kSgd;
}

bool IsEnsemble(Strategy s) {
  return s == Strategy::kSgdEnsemble || s == Strategy::kSgldEnsemble ||
         s == Strategy::kPsgldEnsemble;
}

SeedBundle SeedBundle::FromMaster(Seed master) {
  return SeedBundle{DeriveSeed(master, 0), DeriveSeed(master, 1), DeriveSeed(master, 2),
                    DeriveSeed(master, 3)};
}

json ExperimentConfig::ToJson() const {
  json j;
  j["dataset"] = {
      {"source", source},
      {"path", data_path},
      {"schema", schema_path},
      {"standardize", standardize},
      {"synthetic",
       {{"n_per_class", synthetic_n_per_class},
        {"dim", synthetic_dim},
        {"separation", synthetic_separation}}},
  };
  j["split"] = {{"train", train_count}, {"holdout", holdout_count}, {"test", test_count}};
  j["model"] = {{"hidden", hidden},
                {"activation", ActivationName(activation)},
                {"dropout_rate", dropout_rate}};
  j["strategy"] = StrategyName(strategy);
  j["optimizer"] = {
      {"lr", lr},
      {"schedule", ScheduleKindName(schedule)},
      {"halving_period_epochs", halving_period_epochs},
      {"poly_offset", poly_offset},
      {"poly_gamma", poly_gamma},
      {"prior_variance", prior_variance},
      {"batch_size", batch_size},
      {"epochs", epochs},
      {"burn_in_fraction", burn_in_fraction},
      {"thinning", thinning},
      {"ensemble_k", ensemble_k},
      {"decay", decay},
      {"damping", damping},
      {"baseline_gradient", BaselineGradientName(baseline_gradient)},
  };
  j["loss_bound"] = loss_bound;
  j["seeds"] = {{"split", seeds.split},
                {"init", seeds.init},
                {"data_order", seeds.data_order},
                {"noise", seeds.noise}};
  j["lambda"] = lambda;
  j["attack"] = {{"nonmember_pool", NonmemberPoolName(nonmember_pool)}};
  j["audit"] = {{"shadow_member_fraction", shadow_member_fraction}};
  return j;
}

ExperimentConfig ExperimentConfig::FromJson(const json& input) {
  const ExperimentConfig defaults;
  json j = defaults.ToJson();
  CheckKnownKeys(input, j, "");
  j.merge_patch(input);

  ExperimentConfig c;
  try {
    const json& d = j.at("dataset");
    c.source = d.at("source").get<std::string>();
    c.data_path = d.at("path").get<std::string>();
    c.schema_path = d.at("schema").get<std::string>();
    c.standardize = d.at("standardize").get<bool>();
    c.synthetic_n_per_class = d.at("synthetic").at("n_per_class").get<std::size_t>();
    c.synthetic_dim = d.at("synthetic").at("dim").get<std::size_t>();
    c.synthetic_separation = d.at("synthetic").at("separation").get<double>();

    c.train_count = j.at("split").at("train").get<std::size_t>();
    c.holdout_count = j.at("split").at("holdout").get<std::size_t>();
    c.test_count = j.at("split").at("test").get<std::size_t>();

    c.hidden = j.at("model").at("hidden").get<std::vector<std::size_t>>();
    c.activation = ParseActivation(j.at("model").at("activation").get<std::string>());
    c.dropout_rate = j.at("model").at("dropout_rate").get<double>();

    c.strategy = ParseStrategy(j.at("strategy").get<std::string>());

    const json& o = j.at("optimizer");
    c.lr = o.at("lr").get<double>();
    c.schedule = ParseScheduleKind(o.at("schedule").get<std::string>());
    c.halving_period_epochs = o.at("halving_period_epochs").get<std::int64_t>();
    c.poly_offset = o.at("poly_offset").get<double>();
    c.poly_gamma = o.at("poly_gamma").get<double>();
    c.prior_variance = o.at("prior_variance").get<double>();
    c.batch_size = o.at("batch_size").get<std::size_t>();
    c.epochs = o.at("epochs").get<std::size_t>();
    c.burn_in_fraction = o.at("burn_in_fraction").get<double>();
    c.thinning = o.at("thinning").get<std::int64_t>();
    c.ensemble_k = o.at("ensemble_k").get<std::size_t>();
    c.decay = o.at("decay").get<double>();
    c.damping = o.at("damping").get<double>();
    c.baseline_gradient = ParseBaselineGradient(o.at("baseline_gradient").get<std::string>());

    c.loss_bound = j.at("loss_bound").get<double>();
    c.seeds.split = j.at("seeds").at("split").get<Seed>();
    c.seeds.init = j.at("seeds").at("init").get<Seed>();
    c.seeds.data_order = j.at("seeds").at("data_order").get<Seed>();
    c.seeds.noise = j.at("seeds").at("noise").get<Seed>();
    c.lambda = j.at("lambda").get<double>();
    c.nonmember_pool = ParseNonmemberPool(j.at("attack").at("nonmember_pool").get<std::string>());
    c.shadow_member_fraction = j.at("audit").at("shadow_member_fraction").get<double>();
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("bad config value: ") + e.what());
  }
  c.Validate();
  return c;
}

ExperimentConfig ExperimentConfig::Load(const std::string& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, "config '" + path + "' is not valid JSON: " + e.what());
  }
  return FromJson(j);
}

ExperimentConfig ExperimentConfig::WithOverride(const std::string& assignment) const {
  const auto eq = assignment.find('=');
  Require(eq != std::string::npos && eq > 0, ErrorCode::kConfig,
          "override must look like section.key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;
  }
  json patch = json::object();
  json* cursor = &patch;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    Require(!part.empty(), ErrorCode::kConfig, "empty key segment in '" + key + "'");
    if (dot == std::string::npos) {
      (*cursor)[part] = value;
      break;
    }
    cursor = &(*cursor)[part];
    start = dot + 1;
  }
  json merged = ToJson();
  CheckKnownKeys(patch, merged, "");
  merged.merge_patch(patch);
  return FromJson(merged);
}

void ExperimentConfig::Validate() const {
  Require(source == "german" || source == "csv" || source == "synthetic", ErrorCode::kConfig,
          "dataset.source must be german, csv or synthetic");
  Require(source != "csv" || (!data_path.empty() && !schema_path.empty()), ErrorCode::kConfig,
          "csv datasets need dataset.path and dataset.schema");
  Require(train_count >= 1 && test_count >= 1, ErrorCode::kConfig,
          "train and test splits must be nonempty");
  for (std::size_t h : hidden) Require(h >= 1, ErrorCode::kConfig, "hidden sizes must be >= 1");
  Require(dropout_rate >= 0.0 && dropout_rate < 1.0, ErrorCode::kConfig,
          "model.dropout_rate must lie in [0, 1)");
  Require(lr > 0.0, ErrorCode::kConfig, "optimizer.lr must be positive");
  Require(halving_period_epochs >= 1, ErrorCode::kConfig,
          "optimizer.halving_period_epochs must be >= 1");
  Require(prior_variance > 0.0, ErrorCode::kConfig, "optimizer.prior_variance must be positive");
  Require(batch_size >= 1 && batch_size <= train_count, ErrorCode::kConfig,
          "optimizer.batch_size must lie in [1, train size]");
  Require(epochs >= 1, ErrorCode::kConfig, "optimizer.epochs must be >= 1");
  Require(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0, ErrorCode::kConfig,
          "optimizer.burn_in_fraction must lie in [0, 1)");
  Require(thinning >= 1, ErrorCode::kConfig, "optimizer.thinning must be >= 1");
  Require(ensemble_k >= 1, ErrorCode::kConfig, "optimizer.ensemble_k must be >= 1");
  Require(decay > 0.0 && decay < 1.0, ErrorCode::kConfig, "optimizer.decay must lie in (0, 1)");
  Require(damping > 0.0, ErrorCode::kConfig, "optimizer.damping must be positive");
  LossBound{loss_bound};
  Require(lambda > 0.0 && lambda < 1.0, ErrorCode::kConfig, "lambda must lie in (0, 1)");
  Require(shadow_member_fraction > 0.0 && shadow_member_fraction <= 1.0, ErrorCode::kConfig,
          "audit.shadow_member_fraction must lie in (0, 1]");
}

std::string ExperimentConfig::Hash() const {
  const std::string canonical = ToJson().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool MetricsRecord::SameMetrics(const MetricsRecord& o) const {
  return strategy == o.strategy && auc == o.auc && f1 == o.f1 && acc == o.acc &&
         train_acc == o.train_acc && test_acc == o.test_acc && gap == o.gap &&
         config_hash == o.config_hash;
}

std::string FormatMetrics(std::span<const MetricsRecord> records, EmitFormat format,
                          std::span<const ExperimentConfig> configs) {
  if (format == EmitFormat::kDelimited) {
    std::string out = "strategy,auc,f1,acc,train,test,gap,runtime_s,config_hash\n";
    for (const MetricsRecord& r : records) {
      out += r.strategy + "," + FormatDouble(r.auc) + "," + FormatDouble(r.f1) + "," +
             FormatDouble(r.acc) + "," + FormatDouble(r.train_acc) + "," +
             FormatDouble(r.test_acc) + "," + FormatDouble(r.gap) + "," +
             FormatDouble(r.runtime_s) + "," + r.config_hash + "\n";
    }
    return out;
  }
  json j;
  j["records"] = json::array();
  for (const MetricsRecord& r : records) {
    j["records"].push_back({{"strategy", r.strategy},
                            {"attack", {{"auc", r.auc}, {"f1", r.f1}, {"acc", r.acc}}},
                            {"model",
                             {{"train_acc", r.train_acc},
                              {"test_acc", r.test_acc},
                              {"gap", r.gap}}},
                            {"runtime_s", r.runtime_s},
                            {"config_hash", r.config_hash}});
  }
  j["configs"] = json::array();
  for (const ExperimentConfig& c : configs) j["configs"].push_back(c.ToJson());
  return j.dump(2) + "\n";
}

std::vector<MetricsRecord> ParseMetrics(const std::string& text, EmitFormat format) {
  std::vector<MetricsRecord> records;
  if (format == EmitFormat::kDelimited) {
    const auto lines = SplitLines(text);
    Require(!lines.empty() && lines[0].rfind("strategy,", 0) == 0, ErrorCode::kParse,
            "metrics table is missing its header");
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      const auto f = SplitFields(lines[i], ',');
      Require(f.size() == 9, ErrorCode::kParse,
              "metrics row " + std::to_string(i + 1) + " has " + std::to_string(f.size()) +
                  " fields");
      records.push_back(MetricsRecord{f[0], ParseDouble(f[1]), ParseDouble(f[2]),
                                      ParseDouble(f[3]), ParseDouble(f[4]), ParseDouble(f[5]),
                                      ParseDouble(f[6]), ParseDouble(f[7]), f[8]});
    }
    return records;
  }
  try {
    const json j = json::parse(text);
    for (const json& r : j.at("records")) {
      records.push_back(MetricsRecord{
          r.at("strategy").get<std::string>(), r.at("attack").at("auc").get<double>(),
          r.at("attack").at("f1").get<double>(), r.at("attack").at("acc").get<double>(),
          r.at("model").at("train_acc").get<double>(),
          r.at("model").at("test_acc").get<double>(), r.at("model").at("gap").get<double>(),
          r.at("runtime_s").get<double>(), r.at("config_hash").get<std::string>()});
    }
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("bad metrics document: ") + e.what());
  }
  return records;
}

void EmitMetrics(std::span<const MetricsRecord> records, EmitFormat format,
                 const std::string& path, std::span<const ExperimentConfig> configs) {
  WriteFileAtomic(path, FormatMetrics(records, format, configs));
}

json BuildManifest(const ExperimentConfig& config, const std::vector<std::string>& outputs) {
  return {{"config", config.ToJson()},
          {"config_hash", config.Hash()},
          {"seeds",
           {{"split", config.seeds.split},
            {"init", config.seeds.init},
            {"data_order", config.seeds.data_order},
            {"noise", config.seeds.noise}}},
          {"code_version", CodeVersion()},
          {"outputs", outputs}};
}

std::string CodeVersion() {
#ifdef MPLKIT_VERSION
  return MPLKIT_VERSION;
#else
  return "unknown";
#endif
}

}  // namespace mplkit
