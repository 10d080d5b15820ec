// Copyright 2026 The molbo Authors
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

#include "molbo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "molbo/error.hpp"

namespace molbo::acq {

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double NormalPdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double ProbImprovement(double mean, double std, double y_best) {
  if (std <= 0.0) return mean > y_best ? 1.0 : 0.0;
  return NormalCdf((mean - y_best) / std);
}

double ExpectedImprovement(double mean, double std, double y_best) {
  const double floor = std::max(0.0, mean - y_best);
  if (std <= 0.0) return floor;
  const double z = (mean - y_best) / std;
  const double ei = std * (z * NormalCdf(z) + NormalPdf(z));
  // The closed form never falls below the deterministic gain; rounding can.
  return std::max(ei, floor);
}

double Ucb(double mean, double std, double beta) { return mean + beta * std; }

std::string_view AcquisitionKindName(AcquisitionKind kind) {
  switch (kind) {
    case AcquisitionKind::kPi:
      return "pi";
    case AcquisitionKind::kEi:
      return "ei";
    case AcquisitionKind::kUcb:
      return "ucb";
  }
  return "?";
}

void AcquisitionSpec::Validate() const {
  if (kind == AcquisitionKind::kUcb && !(beta >= 0.0)) {
    throw InputError(fmt::format("UCB beta must be >= 0, got {}", beta));
  }
}

double AcquisitionSpec::operator()(double mean, double std) const {
  switch (kind) {
    case AcquisitionKind::kPi:
      return ProbImprovement(mean, std, y_best);
    case AcquisitionKind::kEi:
      return ExpectedImprovement(mean, std, y_best);
    case AcquisitionKind::kUcb:
      return Ucb(mean, std, beta);
  }
  return 0.0;
}

void BetaSchedule::Validate() const {
  if (!(log10_low <= log10_high) || !std::isfinite(log10_low) ||
      !std::isfinite(log10_high)) {
    throw InputError(fmt::format("invalid beta schedule [{}, {}]", log10_low, log10_high));
  }
}

double SampleBeta(const BetaSchedule& schedule, Rng& rng) {
  const double u = rng.Uniform(schedule.log10_low, schedule.log10_high);
  return std::pow(10.0, u);
}

}  // namespace molbo::acq
