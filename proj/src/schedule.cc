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

#include "mplkit/schedule.h"

#include <cmath>

#include "mplkit/error.h"

namespace mplkit {

std::string ScheduleKindName(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kConstant: return "constant";
    case ScheduleKind::kHalving: return "halving";
    case ScheduleKind::kPolynomial: return "polynomial";
  }
  return "constant";
}

ScheduleKind ParseScheduleKind(const std::string& name) {
  if (name == "constant") return ScheduleKind::kConstant;
  if (name == "halving") return ScheduleKind::kHalving;
  if (name == "polynomial") return ScheduleKind::kPolynomial;
  Fail(ErrorCode::kConfig, "unknown schedule kind '" + name + "'");
}

StepSchedule StepSchedule::Constant(double eps) {
  StepSchedule s;
  s.kind = ScheduleKind::kConstant;
  s.initial = eps;
  return s;
}

StepSchedule StepSchedule::Halving(double eps0, std::int64_t period_steps) {
  StepSchedule s;
  s.kind = ScheduleKind::kHalving;
  s.initial = eps0;
  s.period_steps = period_steps;
  return s;
}

StepSchedule StepSchedule::Polynomial(double a, double b, double gamma) {
  StepSchedule s;
  s.kind = ScheduleKind::kPolynomial;
  s.initial = a;
  s.offset = b;
  s.gamma = gamma;
  return s;
}

double StepSchedule::At(std::int64_t t) const {
  switch (kind) {
    case ScheduleKind::kConstant:
      return initial;
    case ScheduleKind::kHalving:
      return std::ldexp(initial, -static_cast<int>(t / period_steps));
    case ScheduleKind::kPolynomial:
      return initial * std::pow(offset + static_cast<double>(t), -gamma);
  }
  return initial;
}

void StepSchedule::Validate() const {
  Require(std::isfinite(initial) && initial > 0.0, ErrorCode::kSchedule,
          "initial step size must be positive");
  if (kind == ScheduleKind::kHalving) {
    Require(period_steps >= 1, ErrorCode::kSchedule, "halving period must be >= 1 step");
  }
  if (kind == ScheduleKind::kPolynomial) {
    Require(offset > 0.0, ErrorCode::kSchedule, "polynomial offset b must be positive");
    Require(std::isfinite(gamma), ErrorCode::kSchedule, "polynomial gamma must be finite");
  }
}

std::int64_t StepsPerEpoch(std::int64_t dataset_size, std::int64_t batch_size) {
  Require(batch_size >= 1 && dataset_size >= 1, ErrorCode::kConfig,
          "dataset and batch sizes must be positive");
  return (dataset_size + batch_size - 1) / batch_size;
}

ScheduleReport ValidateSchedule(const StepSchedule& schedule, std::int64_t horizon) {
  Require(horizon >= 2, ErrorCode::kSchedule, "schedule horizon must be >= 2");
  schedule.Validate();
  ScheduleReport report;
  report.monotone = true;
  report.constant_step = true;
  const std::int64_t half = horizon / 2;
  double prev = 0.0;
  for (std::int64_t t = 0; t < horizon; ++t) {
    const double eps = schedule.At(t);
    Require(std::isfinite(eps) && eps > 0.0, ErrorCode::kSchedule,
            "step size at t=" + std::to_string(t) + " is not positive");
    if (t > 0) {
      Require(eps <= prev, ErrorCode::kSchedule,
              "step size increases at t=" + std::to_string(t));
      if (eps != prev) report.constant_step = false;
    }
    prev = eps;
    report.sum += eps;
    report.sum_sq += eps * eps;
    if (t + 1 == half) report.half_ratio = report.sum_sq / report.sum;
  }
  report.ratio = report.sum_sq / report.sum;
  report.ratio_decreasing = report.ratio < report.half_ratio;
  return report;
}

}  // namespace mplkit
