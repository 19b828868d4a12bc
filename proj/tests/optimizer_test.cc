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
#include <vector>

#include <gtest/gtest.h>

#include "mplkit/error.h"
#include "mplkit/optimizer.h"

namespace mplkit {
namespace {

OptimizerConfig Config(OptimizerKind kind, double eps, Seed seed = 1) {
  OptimizerConfig c;
  c.kind = kind;
  c.schedule = StepSchedule::Constant(eps);
  c.noise_seed = seed;
  return c;
}

double SampleVariance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x / v.size();
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean) / (v.size() - 1);
  return var;
}

TEST(OptimizerTest, SgldDeterministicPart) {
  Optimizer opt(Config(OptimizerKind::kSgld, 0.01), 1);
  opt.set_noise_enabled(false);
  std::vector<double> theta = {1.0};
  opt.Apply(theta, std::vector<double>{2.0});
  EXPECT_DOUBLE_EQ(theta[0], 1.0 - 0.005 * 2.0);
  EXPECT_EQ(opt.steps_taken(), 1);
  opt.Apply(theta, std::vector<double>{0.0});
  EXPECT_DOUBLE_EQ(theta[0], 0.99);
}

TEST(OptimizerTest, SgdStep) {
  Optimizer opt(Config(OptimizerKind::kSgd, 0.1), 1);
  std::vector<double> theta = {1.0};
  opt.Apply(theta, std::vector<double>{0.5});
  EXPECT_DOUBLE_EQ(theta[0], 1.0 - 0.1 * 0.5);
  opt.Apply(theta, std::vector<double>{0.0});
  EXPECT_DOUBLE_EQ(theta[0], 0.95);
}

TEST(OptimizerTest, RmspropFirstStep) {
  OptimizerConfig c = Config(OptimizerKind::kRmsprop, 0.001);
  Optimizer opt(c, 1);
  std::vector<double> theta = {0.0};
  opt.Apply(theta, std::vector<double>{1.0});
  const double v = (1 - 0.99) * 1.0;
  EXPECT_DOUBLE_EQ(opt.second_moment()[0], v);
  EXPECT_NEAR(theta[0], -0.001 / (std::sqrt(v) + 1e-5), 1e-18);
  EXPECT_NEAR(theta[0], -0.0099990, 1e-7);
}

TEST(OptimizerTest, RmspropZeroGradientDecaysAccumulator) {
  Optimizer opt(Config(OptimizerKind::kRmsprop, 0.001), 2);
  std::vector<double> theta = {0.3, -0.2};
  opt.Apply(theta, std::vector<double>{1.0, 2.0});
  const std::vector<double> before_theta = theta;
  const std::vector<double> v(opt.second_moment().begin(), opt.second_moment().end());
  opt.Apply(theta, std::vector<double>{0.0, 0.0});
  EXPECT_EQ(theta, before_theta);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_DOUBLE_EQ(opt.second_moment()[i], 0.99 * v[i]);
    EXPECT_GE(opt.second_moment()[i], 0.0);
  }
}

TEST(OptimizerTest, SgldNoiseVarianceMatchesStep) {
  const double eps = 0.01;
  Optimizer opt(Config(OptimizerKind::kSgld, eps, 77), 3);
  std::vector<double> theta(3, 0.0);
  std::vector<std::vector<double>> deltas(3);
  for (int t = 0; t < 100000; ++t) {
    const std::vector<double> before = theta;
    opt.Apply(theta, std::vector<double>(3, 0.0));
    for (int i = 0; i < 3; ++i) deltas[i].push_back(theta[i] - before[i]);
  }
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(SampleVariance(deltas[i]) / eps, 1.0, 0.05);
}

TEST(OptimizerTest, PsgldNoiseVarianceMatchesPreconditioner) {
  const double eps = 0.01;
  OptimizerConfig c = Config(OptimizerKind::kPsgld, eps, 78);
  Optimizer opt(c, 2);
  std::vector<double> theta(2, 0.0);
  opt.set_noise_enabled(false);
  opt.Apply(theta, std::vector<double>{3.0, 0.5});
  opt.set_noise_enabled(true);
  opt.set_accumulator_frozen(true);
  const std::vector<double> v(opt.second_moment().begin(), opt.second_moment().end());
  std::vector<std::vector<double>> deltas(2);
  for (int t = 0; t < 100000; ++t) {
    const std::vector<double> before = theta;
    opt.Apply(theta, std::vector<double>(2, 0.0));
    for (int i = 0; i < 2; ++i) deltas[i].push_back(theta[i] - before[i]);
  }
  for (int i = 0; i < 2; ++i) {
    const double g = 1.0 / (1e-5 + std::sqrt(v[i]));
    EXPECT_NEAR(SampleVariance(deltas[i]) / (eps * g), 1.0, 0.05);
  }
}

TEST(OptimizerTest, PsgldWithIdentityPreconditionerIsSgld) {
  OptimizerConfig a = Config(OptimizerKind::kSgld, 0.02, 5);
  OptimizerConfig b = Config(OptimizerKind::kPsgld, 0.02, 5);
  b.damping = 1.0;
  Optimizer sgld(a, 4);
  Optimizer psgld(b, 4);
  psgld.set_accumulator_frozen(true);
  std::vector<double> x(4, 0.5);
  std::vector<double> y(4, 0.5);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> g = {x[0], -x[1], 2 * x[2], std::sin(x[3])};
    sgld.Apply(x, g);
    psgld.Apply(y, g);
    ASSERT_EQ(x, y);
  }
}

TEST(OptimizerTest, NonFiniteGradientRejectedWithoutSideEffects) {
  Optimizer opt(Config(OptimizerKind::kPsgld, 0.01), 2);
  std::vector<double> theta = {1.0, 2.0};
  try {
    opt.Apply(theta, std::vector<double>{NAN, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNumeric);
  }
  EXPECT_EQ(theta, (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(opt.steps_taken(), 0);
  EXPECT_EQ(opt.second_moment()[0], 0.0);
}

TEST(OptimizerTest, SameSeedSameTrajectory) {
  for (OptimizerKind k : {OptimizerKind::kSgd, OptimizerKind::kRmsprop, OptimizerKind::kSgld,
                          OptimizerKind::kPsgld}) {
    Optimizer a(Config(k, 0.01, 9), 3);
    Optimizer b(Config(k, 0.01, 9), 3);
    std::vector<double> x = {1, 2, 3};
    std::vector<double> y = {1, 2, 3};
    for (int t = 0; t < 200; ++t) {
      a.Apply(x, std::vector<double>{x[0], x[1], x[2]});
      b.Apply(y, std::vector<double>{y[0], y[1], y[2]});
    }
    EXPECT_EQ(x, y) << OptimizerKindName(k);
  }
}

class GradientTest : public ::testing::Test {
 protected:
  GradientTest() {
    arch_.layer_sizes = {3, 4, 2};
    params_ = InitParams(arch_, 3);
    for (int i = 0; i < 8; ++i) {
      batch_.push_back(Sample{{0.1 * i, -0.2 * i, 1.0}, static_cast<std::size_t>(i % 2)});
    }
  }
  MlpArchitecture arch_;
  ModelParams params_;
  std::vector<Sample> batch_;
  LossBound bound_;
};

TEST_F(GradientTest, PriorOnlyGradientIsTheta) {
  ModelParams p = params_;
  // A batch with no data influence: compare against the data term separately.
  const auto full = MinibatchLossGrad(p, batch_, 8, GaussianPrior{1.0}, bound_);
  const auto data = Backward(p, batch_, bound_);
  for (std::size_t i = 0; i < full.size(); ++i) {
    EXPECT_NEAR(full[i], p.theta[i] + data[i], 1e-12);
  }
  const auto half_var = MinibatchLossGrad(p, batch_, 8, GaussianPrior{0.5}, bound_);
  for (std::size_t i = 0; i < full.size(); ++i) {
    EXPECT_NEAR(half_var[i], 2 * p.theta[i] + data[i], 1e-12);
  }
}

TEST_F(GradientTest, DataTermScaledByDatasetOverBatch) {
  const auto data = Backward(params_, batch_, bound_);
  const auto g = MinibatchLossGrad(params_, batch_, 100, GaussianPrior{1.0}, bound_);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(g[i], params_.theta[i] + 12.5 * data[i], 1e-10);
  }
  EXPECT_DOUBLE_EQ(400.0 / 32.0, 12.5);
}

TEST_F(GradientTest, DatasetSmallerThanBatchIsConfigError) {
  try {
    MinibatchLossGrad(params_, batch_, 4, GaussianPrior{1.0}, bound_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST_F(GradientTest, BaselineGradientScalings) {
  const auto data = Backward(params_, batch_, bound_);
  const auto mean = BaselineGrad(params_, batch_, 400, BaselineGradient::kMean, bound_);
  const auto scaled = BaselineGrad(params_, batch_, 400, BaselineGradient::kScaled, bound_);
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_NEAR(mean[i], data[i] / 8.0, 1e-14);
    EXPECT_NEAR(scaled[i], data[i] * 50.0, 1e-11);
  }
}

TEST_F(GradientTest, StepWrappersCheckKind) {
  Optimizer sgd(Config(OptimizerKind::kSgd, 0.01), params_.theta.size());
  ModelParams p = params_;
  try {
    SgldStep(p, sgd, batch_, 8, bound_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kState);
  }
  EXPECT_NO_THROW(SgdStep(p, sgd, batch_, 8, bound_));
  EXPECT_NE(p.theta, params_.theta);
}

TEST(OptimizerTest, SgldSamplesConjugateGaussianPosterior) {
  // Prior N(0, 1), likelihood N(z_i | theta, 1) for 20 points.
  const std::vector<double> z = {0.3, 1.2, -0.5, 0.8, 2.0, 0.1, 0.9, 1.5, -0.2, 0.7,
                                 1.1, 0.4, 0.6, 1.8, -0.9, 0.0, 1.3, 0.5, 0.2, 1.0};
  double sum = 0.0;
  for (double v : z) sum += v;
  const double precision = 1.0 + z.size();
  const double post_mean = sum / precision;
  const double post_var = 1.0 / precision;
  const double eps = 0.002;
  Optimizer opt(Config(OptimizerKind::kSgld, eps, 31), 1);
  std::vector<double> theta = {post_mean};
  const int burn = 2000;
  const int steps = 400000;
  double m1 = 0.0;
  double m2 = 0.0;
  for (int t = 0; t < burn + steps; ++t) {
    const double grad = theta[0] + (precision - 1.0) * theta[0] - sum;
    opt.Apply(theta, std::vector<double>{grad});
    if (t >= burn) {
      m1 += theta[0] / steps;
      m2 += theta[0] * theta[0] / steps;
    }
  }
  const double var = m2 - m1 * m1;
  EXPECT_NEAR(m1 / post_mean, 1.0, 0.05);
  EXPECT_NEAR(var / post_var, 1.0, 0.05);
}

}  // namespace
}  // namespace mplkit
