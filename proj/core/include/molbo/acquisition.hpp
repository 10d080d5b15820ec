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

#pragma once

#include <string_view>

#include "molbo/rng.hpp"

namespace molbo::acq {

/// Standard normal CDF via erfc (accurate deep into both tails).
double NormalCdf(double z);
double NormalPdf(double z);

/// P(f > y_best) for f ~ N(mean, std^2). std = 0 gives the step limit
/// (1 if mean > y_best, else 0).
double ProbImprovement(double mean, double std, double y_best);

/// E[max(0, f - y_best)]; std = 0 gives max(0, mean - y_best).
double ExpectedImprovement(double mean, double std, double y_best);

/// mean + beta * std.
double Ucb(double mean, double std, double beta);

enum class AcquisitionKind { kPi, kEi, kUcb };

std::string_view AcquisitionKindName(AcquisitionKind kind);

struct AcquisitionSpec {
  AcquisitionKind kind = AcquisitionKind::kUcb;
  double y_best = 0.0;  // pi / ei
  double beta = 1.0;    // ucb

  void Validate() const;
  double operator()(double mean, double std) const;
};

/// beta = 10^u with u ~ U[log10_low, log10_high].
struct BetaSchedule {
  double log10_low = -2.0;
  double log10_high = 0.0;

  void Validate() const;
};

double SampleBeta(const BetaSchedule& schedule, Rng& rng);

}  // namespace molbo::acq
