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

#ifndef MPLKIT_PRIVACY_H_
#define MPLKIT_PRIVACY_H_

// Membership-privacy leakage (Mpl) of a trained model or ensemble.
//
// The optimal attacker holding a shadow dataset S with member ratio lambda
// computes P(m=1 | z, theta, S) = sigmoid(s + t_lambda), where
// t_lambda = log(lambda / (1 - lambda)) and the measure score
// s = t_p(z) - l(z, theta) compares the sample's loss against the threshold
// t_p(z) = -log E_{theta~p_S} exp(-l(z, theta)). The leakage is the
// attacker's advantage over always answering lambda:
//
//   Mpl = max(P - lambda, 0) <= max(s / 4, 0)
//
// since the sigmoid is 1/4-Lipschitz. For an ensemble output y_hat the score
// becomes s~ = E_{p_S}[l] - l~(y, y_hat) and the same bound applies.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mplkit/mlp.h"

namespace mplkit {

// Additive slack used by every bound check.
inline constexpr double kBoundTolerance = 1e-9;

double Sigmoid(double t);

class ShadowDataset {
 public:
  struct Entry {
    Sample sample;
    bool member = false;
  };

  static constexpr double kDefaultLambda = 0.5;

  // lambda is the attacker's prior member ratio and is configured
  // independently of the entries. Throws a config error unless 0 < lambda < 1.
  explicit ShadowDataset(std::vector<Entry> entries, double lambda = kDefaultLambda);

  std::span<const Entry> entries() const { return entries_; }
  double lambda() const { return lambda_; }
  double log_odds() const { return log_odds_; }  // t_lambda

  // S_T, the samples flagged as members.
  std::vector<Sample> Members() const;

 private:
  std::vector<Entry> entries_;
  double lambda_;
  double log_odds_;
};

// s = t_p - l. Positive when the loss sits below the threshold, i.e. the
// sample looks like a member.
double MeasureScore(double threshold_tp, double loss);

// sigmoid(s + t_lambda); exactly lambda at s = 0.
double MembershipPosterior(double score, double lambda);
double MembershipPosterior(double score, const ShadowDataset& shadow);

// max(P - lambda, 0). Throws a config error for P outside [0, 1] or lambda
// outside (0, 1).
double MplLoss(double posterior, double lambda);

// max(s / 4, 0)
double MplLipschitzBound(double score);

// s~ = E_{p_S}[l] - l~(y, y_hat)
double EnsembleMeasureScore(double mean_loss, double ensemble_loss);

// Uniform bound on the expected ensemble Mpl of a Langevin run:
//   (B/4)(e^{2B} - 1) + c_approx (1/S_L + sum eps^2 / S_L)
// The finite-time term has no known constant; c_approx = 0 gives the
// leading term alone.
double UniformMplConstant(double b, double step_sum, double step_sq_sum,
                          double c_approx = 0.0);

// B (e^{2B} - 1), the bound on |E_{p_S}[l] - E_{p_D}[l]| when S = D minus one.
double LeaveOneOutBound(double b);

// Mpl <= epsilon / 4 for a model released under (epsilon, delta)-DP.
double DpMplBound(double epsilon);

// A posterior with finite support, used for exact leave-one-out checks.
struct DiscretePosterior {
  std::vector<ModelParams> support;
  std::vector<double> weights;

  // Throws a numeric error unless weights are nonnegative and sum to 1
  // within 1e-12, and a shape error if the lists differ in length.
  void Validate() const;

  // Exact Bayes update over the support:
  //   w_i propto prior_i * prod_{z in data} exp(-l(z, theta_i)).
  // Throws a numeric error if every weight vanishes.
  static DiscretePosterior FromBayes(std::vector<ModelParams> support,
                                     std::span<const double> prior_weights,
                                     std::span<const Sample> data, const LossBound& bound);
};

struct LooCheckResult {
  double loo_error = 0.0;
  double bound = 0.0;
  bool holds = false;
};

// |E_{p_S}[l(z)] - E_{p_D}[l(z)]| against B (e^{2B} - 1). Both posteriors
// must share one support (state error otherwise).
LooCheckResult ExactLooCheck(const DiscretePosterior& posterior_d,
                             const DiscretePosterior& posterior_s, const Sample& z,
                             const LossBound& bound);

struct MplReport {
  std::string sample_id;
  double score = 0.0;      // s or s~
  double posterior = 0.0;  // P(m=1 | z, ...)
  double mpl = 0.0;
  double lipschitz_bound = 0.0;
};

MplReport MakeMplReport(std::string sample_id, double score, double lambda);

// Delimited table with header "sample_id,s,P,mpl,bound"; reals use 17
// significant digits.
std::string FormatMplReports(std::span<const MplReport> reports, char delimiter = ',');
std::vector<MplReport> ParseMplReports(const std::string& text, char delimiter = ',');

}  // namespace mplkit

#endif  // MPLKIT_PRIVACY_H_
