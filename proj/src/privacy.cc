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

#include "mplkit/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "mplkit/error.h"
#include "mplkit/text_util.h"

namespace mplkit {

double Sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

ShadowDataset::ShadowDataset(std::vector<Entry> entries, double lambda)
    : entries_(std::move(entries)), lambda_(lambda) {
  Require(lambda > 0.0 && lambda < 1.0, ErrorCode::kConfig,
          "member ratio lambda must lie strictly between 0 and 1");
  log_odds_ = std::log(lambda / (1.0 - lambda));
}

std::vector<Sample> ShadowDataset::Members() const {
  std::vector<Sample> members;
  for (const Entry& e : entries_) {
    if (e.member) members.push_back(e.sample);
  }
  return members;
}

double MeasureScore(double threshold_tp, double loss) { return threshold_tp - loss; }

double MembershipPosterior(double score, double lambda) {
  Require(lambda > 0.0 && lambda < 1.0, ErrorCode::kConfig,
          "member ratio lambda must lie strictly between 0 and 1");
  Require(!std::isnan(score), ErrorCode::kNumeric, "measure score is NaN");
  // sigmoid(s + log(lambda / (1 - lambda))) written so that s = 0 returns
  // lambda without rounding.
  if (score == 0.0) return lambda;
  if (score > 0.0) return lambda / (lambda + (1.0 - lambda) * std::exp(-score));
  const double e = lambda * std::exp(score);
  return e / (e + (1.0 - lambda));
}

double MembershipPosterior(double score, const ShadowDataset& shadow) {
  return MembershipPosterior(score, shadow.lambda());
}

double MplLoss(double posterior, double lambda) {
  Require(posterior >= 0.0 && posterior <= 1.0, ErrorCode::kConfig,
          "attack posterior must lie in [0, 1]");
  Require(lambda > 0.0 && lambda < 1.0, ErrorCode::kConfig,
          "member ratio lambda must lie strictly between 0 and 1");
  return std::max(posterior - lambda, 0.0);
}

double MplLipschitzBound(double score) { return std::max(score / 4.0, 0.0); }

double EnsembleMeasureScore(double mean_loss, double ensemble_loss) {
  return mean_loss - ensemble_loss;
}

double UniformMplConstant(double b, double step_sum, double step_sq_sum, double c_approx) {
  Require(b > 0.0, ErrorCode::kConfig, "loss bound must be positive");
  Require(step_sum > 0.0, ErrorCode::kConfig, "step-size sum must be positive");
  Require(c_approx >= 0.0, ErrorCode::kConfig, "approximation constant must be >= 0");
  const double leading = b / 4.0 * std::expm1(2.0 * b);
  return leading + c_approx * (1.0 / step_sum + step_sq_sum / step_sum);
}

double LeaveOneOutBound(double b) {
  Require(b > 0.0, ErrorCode::kConfig, "loss bound must be positive");
  return b * std::expm1(2.0 * b);
}

double DpMplBound(double epsilon) {
  Require(epsilon >= 0.0, ErrorCode::kConfig, "privacy budget must be >= 0");
  return epsilon / 4.0;
}

void DiscretePosterior::Validate() const {
  Require(!support.empty() && support.size() == weights.size(), ErrorCode::kShape,
          "support and weights must be nonempty and equally long");
  double total = 0.0;
  for (double w : weights) {
    Require(w >= 0.0 && std::isfinite(w), ErrorCode::kNumeric, "negative posterior weight");
    total += w;
  }
  Require(std::abs(total - 1.0) <= 1e-12, ErrorCode::kNumeric,
          "posterior weights do not sum to 1");
}

DiscretePosterior DiscretePosterior::FromBayes(std::vector<ModelParams> support,
                                               std::span<const double> prior_weights,
                                               std::span<const Sample> data,
                                               const LossBound& bound) {
  Require(!support.empty() && support.size() == prior_weights.size(), ErrorCode::kShape,
          "support and prior must be nonempty and equally long");
  std::vector<double> log_w(support.size());
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < support.size(); ++i) {
    Require(prior_weights[i] >= 0.0, ErrorCode::kNumeric, "negative prior weight");
    double lw = std::log(prior_weights[i]);
    for (const Sample& z : data) lw -= SampleLoss(support[i], z, bound);
    log_w[i] = lw;
    max_log = std::max(max_log, lw);
  }
  Require(std::isfinite(max_log), ErrorCode::kNumeric, "posterior has zero total weight");
  std::vector<double> w(support.size());
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(log_w[i] - max_log);
    total += w[i];
  }
  for (double& x : w) x /= total;
  return DiscretePosterior{std::move(support), std::move(w)};
}

LooCheckResult ExactLooCheck(const DiscretePosterior& posterior_d,
                             const DiscretePosterior& posterior_s, const Sample& z,
                             const LossBound& bound) {
  posterior_d.Validate();
  posterior_s.Validate();
  Require(posterior_d.support.size() == posterior_s.support.size(), ErrorCode::kState,
          "posteriors have different supports");
  double mean_d = 0.0;
  double mean_s = 0.0;
  for (std::size_t i = 0; i < posterior_d.support.size(); ++i) {
    Require(posterior_d.support[i] == posterior_s.support[i], ErrorCode::kState,
            "posteriors have different supports");
    const double loss = SampleLoss(posterior_d.support[i], z, bound);
    mean_d += posterior_d.weights[i] * loss;
    mean_s += posterior_s.weights[i] * loss;
  }
  LooCheckResult result;
  result.loo_error = std::abs(mean_s - mean_d);
  result.bound = LeaveOneOutBound(bound.b());
  result.holds = result.loo_error <= result.bound + kBoundTolerance;
  return result;
}

MplReport MakeMplReport(std::string sample_id, double score, double lambda) {
  MplReport r;
  r.sample_id = std::move(sample_id);
  r.score = score;
  r.posterior = MembershipPosterior(score, lambda);
  r.mpl = MplLoss(r.posterior, lambda);
  r.lipschitz_bound = MplLipschitzBound(score);
  return r;
}

std::string FormatMplReports(std::span<const MplReport> reports, char delimiter) {
  const std::string d(1, delimiter);
  std::string out = "sample_id" + d + "s" + d + "P" + d + "mpl" + d + "bound\n";
  for (const MplReport& r : reports) {
    out += r.sample_id + d + FormatDouble(r.score) + d + FormatDouble(r.posterior) + d +
           FormatDouble(r.mpl) + d + FormatDouble(r.lipschitz_bound) + "\n";
  }
  return out;
}

std::vector<MplReport> ParseMplReports(const std::string& text, char delimiter) {
  std::vector<MplReport> reports;
  const auto lines = SplitLines(text);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = SplitFields(lines[i], delimiter);
    Require(f.size() == 5, ErrorCode::kParse,
            "MplReport row " + std::to_string(i + 1) + " has " + std::to_string(f.size()) +
                " fields");
    reports.push_back(MplReport{f[0], ParseDouble(f[1]), ParseDouble(f[2]),
                                ParseDouble(f[3]), ParseDouble(f[4])});
  }
  return reports;
}

}  // namespace mplkit
