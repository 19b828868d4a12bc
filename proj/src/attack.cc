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

#include "mplkit/attack.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mplkit/error.h"
#include "mplkit/text_util.h"

namespace mplkit {
namespace {

double NormalizedLoss(const Predictor& predictor, const Sample& z, const LossBound& bound) {
  return NllLoss(predictor(z.x), z.y, bound) / bound.b();
}

void RequireBothClasses(const AttackScoreSet& scores) {
  const std::size_t members = scores.member_count();
  Require(members > 0 && members < scores.entries.size(), ErrorCode::kInput,
          "ROC analysis needs both members and nonmembers");
}

}  // namespace

std::size_t AttackScoreSet::member_count() const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [](const ScoreEntry& e) { return e.member; }));
}

AttackScoreSet ScoreSamples(const Predictor& predictor, std::span<const Sample> members,
                            std::span<const Sample> nonmembers, const LossBound& bound) {
  Require(!members.empty(), ErrorCode::kInput, "no member samples to score");
  Require(!nonmembers.empty(), ErrorCode::kInput, "no nonmember samples to score");
  AttackScoreSet scores;
  scores.entries.reserve(members.size() + nonmembers.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    scores.entries.push_back(
        {"member:" + std::to_string(i), NormalizedLoss(predictor, members[i], bound), true});
  }
  for (std::size_t i = 0; i < nonmembers.size(); ++i) {
    scores.entries.push_back({"nonmember:" + std::to_string(i),
                              NormalizedLoss(predictor, nonmembers[i], bound), false});
  }
  return scores;
}

double RocAuc(const AttackScoreSet& scores) {
  RequireBothClasses(scores);
  const auto& e = scores.entries;
  std::vector<std::size_t> order(e.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return e[a].normalized_loss < e[b].normalized_loss;
  });
  // Sum of 1-based midranks of the nonmembers.
  double nonmember_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && e[order[j]].normalized_loss == e[order[i]].normalized_loss) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (!e[order[k]].member) nonmember_rank_sum += midrank;
    }
    i = j;
  }
  const double n_mem = static_cast<double>(scores.member_count());
  const double n_non = static_cast<double>(scores.nonmember_count());
  const double u = nonmember_rank_sum - n_non * (n_non + 1.0) / 2.0;
  return u / (n_mem * n_non);
}

std::vector<RocPoint> RocCurve(const AttackScoreSet& scores) {
  RequireBothClasses(scores);
  std::vector<ScoreEntry> sorted = scores.entries;
  std::sort(sorted.begin(), sorted.end(), [](const ScoreEntry& a, const ScoreEntry& b) {
    return a.normalized_loss < b.normalized_loss;
  });
  const double n_mem = static_cast<double>(scores.member_count());
  const double n_non = static_cast<double>(scores.nonmember_count());
  std::vector<RocPoint> curve;
  curve.push_back({-std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double t = sorted[i].normalized_loss;
    while (i < sorted.size() && sorted[i].normalized_loss == t) {
      (sorted[i].member ? tp : fp) += 1;
      ++i;
    }
    curve.push_back({t, static_cast<double>(fp) / n_non, static_cast<double>(tp) / n_mem});
  }
  return curve;
}

AttackReport FixedThresholdAttack(const AttackScoreSet& scores, double threshold) {
  Require(std::isfinite(threshold), ErrorCode::kConfig, "attack threshold must be finite");
  AttackReport r;
  r.threshold = threshold;
  for (const ScoreEntry& e : scores.entries) {
    const bool predicted_member = e.normalized_loss <= threshold;
    if (e.member) {
      (predicted_member ? r.tp : r.fn) += 1;
    } else {
      (predicted_member ? r.fp : r.tn) += 1;
    }
  }
  const double total = static_cast<double>(scores.entries.size());
  r.accuracy = total > 0 ? static_cast<double>(r.tp + r.tn) / total : 0.0;
  const double precision =
      r.tp + r.fp > 0 ? static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp) : 0.0;
  const double recall =
      r.tp + r.fn > 0 ? static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn) : 0.0;
  r.f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  const std::size_t members = r.tp + r.fn;
  r.auc = members > 0 && members < scores.entries.size()
              ? RocAuc(scores)
              : std::numeric_limits<double>::quiet_NaN();
  return r;
}

double MeanTrainLossThreshold(const Predictor& predictor, std::span<const Sample> train,
                              const LossBound& bound) {
  Require(!train.empty(), ErrorCode::kInput, "training set is empty");
  double total = 0.0;
  for (const Sample& z : train) total += NormalizedLoss(predictor, z, bound);
  return total / static_cast<double>(train.size());
}

double Accuracy(const Predictor& predictor, std::span<const Sample> samples) {
  Require(!samples.empty(), ErrorCode::kInput, "cannot score an empty set");
  std::size_t correct = 0;
  for (const Sample& z : samples) {
    if (ArgMax(predictor(z.x)) == z.y) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

std::string FormatScoreSet(const AttackScoreSet& scores, char delimiter) {
  const std::string d(1, delimiter);
  std::string out = "id" + d + "normalized_loss" + d + "member\n";
  for (const ScoreEntry& e : scores.entries) {
    out += e.id + d + FormatDouble(e.normalized_loss) + d + (e.member ? "1" : "0") + "\n";
  }
  return out;
}

std::string FormatAttackReport(const AttackReport& r, char delimiter) {
  const std::string d(1, delimiter);
  return "auc" + d + "f1" + d + "accuracy" + d + "threshold" + d + "tp" + d + "fp" + d +
         "tn" + d + "fn\n" + FormatDouble(r.auc) + d + FormatDouble(r.f1) + d +
         FormatDouble(r.accuracy) + d + FormatDouble(r.threshold) + d +
         std::to_string(r.tp) + d + std::to_string(r.fp) + d + std::to_string(r.tn) + d +
         std::to_string(r.fn) + "\n";
}

std::string FormatRocCurve(std::span<const RocPoint> curve, char delimiter) {
  const std::string d(1, delimiter);
  std::string out = "threshold" + d + "fpr" + d + "tpr\n";
  for (const RocPoint& p : curve) {
    out += FormatDouble(p.threshold) + d + FormatDouble(p.fpr) + d + FormatDouble(p.tpr) + "\n";
  }
  return out;
}

}  // namespace mplkit
