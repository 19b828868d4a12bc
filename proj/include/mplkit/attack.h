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

#ifndef MPLKIT_ATTACK_H_
#define MPLKIT_ATTACK_H_

// Loss-threshold membership attack: predict "member" iff the normalized loss
// n = l~(y, y_hat) / B is at most a threshold t.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mplkit/mlp.h"
#include "mplkit/posterior.h"

namespace mplkit {

struct ScoreEntry {
  std::string id;
  double normalized_loss = 0.0;
  bool member = false;
};

struct AttackScoreSet {
  std::vector<ScoreEntry> entries;

  std::size_t member_count() const;
  std::size_t nonmember_count() const { return entries.size() - member_count(); }
};

struct AttackReport {
  double auc = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  double threshold = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
};

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

// Scores members and nonmembers by the normalized bounded loss of the
// predictor's output. Ids are "member:<i>" and "nonmember:<i>". Throws an
// input error if either list is empty.
AttackScoreSet ScoreSamples(const Predictor& predictor, std::span<const Sample> members,
                            std::span<const Sample> nonmembers, const LossBound& bound);

// Area under the ROC curve of the sweep over all thresholds, computed from
// midranks: the fraction of (member, nonmember) pairs in which the member has
// the lower score, ties counting 1/2. Throws an input error unless both
// classes are present.
double RocAuc(const AttackScoreSet& scores);

// (FPR, TPR) at every distinct score used as the threshold, preceded by the
// (0, 0) point.
std::vector<RocPoint> RocCurve(const AttackScoreSet& scores);

// Confusion counts, F1 (members positive, 0 when precision + recall = 0) and
// accuracy at one threshold. auc is filled in when both classes are present
// and NaN otherwise.
AttackReport FixedThresholdAttack(const AttackScoreSet& scores, double threshold);

// Mean normalized loss over the training samples.
double MeanTrainLossThreshold(const Predictor& predictor, std::span<const Sample> train,
                              const LossBound& bound);

double Accuracy(const Predictor& predictor, std::span<const Sample> samples);

std::string FormatScoreSet(const AttackScoreSet& scores, char delimiter = ',');
std::string FormatAttackReport(const AttackReport& report, char delimiter = ',');
std::string FormatRocCurve(std::span<const RocPoint> curve, char delimiter = ',');

}  // namespace mplkit

#endif  // MPLKIT_ATTACK_H_
