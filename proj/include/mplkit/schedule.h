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

#ifndef MPLKIT_SCHEDULE_H_
#define MPLKIT_SCHEDULE_H_

#include <cstdint>
#include <string>

namespace mplkit {

enum class ScheduleKind { kConstant, kHalving, kPolynomial };

std::string ScheduleKindName(ScheduleKind kind);
ScheduleKind ParseScheduleKind(const std::string& name);

// Step sizes indexed by the 0-based update counter t.
//   constant:   eps_t = initial
//   halving:    eps_t = initial * 2^-floor(t / period_steps)
//   polynomial: eps_t = initial * (offset + t)^-gamma
struct StepSchedule {
  ScheduleKind kind = ScheduleKind::kConstant;
  double initial = 1e-3;
  std::int64_t period_steps = 1;
  double offset = 1.0;
  double gamma = 0.55;

  static StepSchedule Constant(double eps);
  static StepSchedule Halving(double eps0, std::int64_t period_steps);
  static StepSchedule Polynomial(double a, double b, double gamma);

  double At(std::int64_t t) const;

  // Throws a schedule error for non-positive parameters.
  void Validate() const;
};

std::int64_t StepsPerEpoch(std::int64_t dataset_size, std::int64_t batch_size);

struct ScheduleReport {
  bool monotone = false;       // non-increasing over the horizon
  bool constant_step = false;  // every step equal; accepted as constant-step mode
  double sum = 0.0;            // S_L
  double sum_sq = 0.0;         // sum of eps_t^2
  double ratio = 0.0;          // sum_sq / S_L at the full horizon
  double half_ratio = 0.0;     // the same ratio at half the horizon
  bool ratio_decreasing = false;
};

// Evaluates eps_0 .. eps_{horizon-1}. Throws a schedule error if any step is
// non-positive or the schedule ever increases.
ScheduleReport ValidateSchedule(const StepSchedule& schedule, std::int64_t horizon);

}  // namespace mplkit

#endif  // MPLKIT_SCHEDULE_H_
