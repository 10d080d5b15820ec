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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "molbo/acquisition.hpp"

namespace molbo::pitfalls {

/// 0.5 N(x; 0.2, 0.08) + N(x; 0.85, 0.05), both bumps unnormalized.
double TargetFunction1d(double x);

struct Demo1DProblem {
  std::vector<double> train_x;
  std::vector<double> train_y;
  std::vector<double> grid;

  /// Six points in the left cluster, 401-point grid on [0, 1].
  static Demo1DProblem Default(int grid_points = 401);
  void Validate() const;
};

struct SweepRow {
  double x = 0.0;
  double mean = 0.0;
  double std = 0.0;
  double pi = 0.0;
  double ei = 0.0;
  double ucb = 0.0;
};

struct Sweep {
  double sigma = 0.0;
  double lengthscale = 0.0;
  double noise = 0.0;
  double y_best = 0.0;
  std::vector<SweepRow> rows;

  /// sweep_sigma{sigma}_ell{lengthscale}.csv
  std::string FileName() const;
  void WriteCsv(std::ostream& out) const;
  /// Row whose x is closest to `x`.
  const SweepRow& At(double x) const;
};

/// RBF GP on the training cluster, evaluated over the grid. PI and EI use
/// the best training label; UCB uses beta = 1.
Sweep SweepPair(const Demo1DProblem& problem, double sigma, double lengthscale,
                double noise = 1e-4);

std::vector<Sweep> RunSweeps(const Demo1DProblem& problem, std::span<const double> sigmas,
                             std::span<const double> lengthscales, double noise = 1e-4);

inline constexpr double kDefaultSigmas[] = {0.1, 1.0};
inline constexpr double kDefaultLengthscales[] = {0.05, 5.0, 50.0};

/// Grid index maximizing `column` among x in [lo, hi]; first index on ties.
std::size_t ArgmaxInRange(const Sweep& sweep, double SweepRow::*column, double lo, double hi);

struct SearchTrace {
  std::vector<double> picks;
  /// Largest true g over the training points and the picks.
  double best_g = 0.0;
};

/// Sequential grid BO: refit, maximize the acquisition over unevaluated grid
/// points in [lo, hi], evaluate g there, repeat.
SearchTrace SequentialSearch(const Demo1DProblem& problem, acq::AcquisitionKind kind,
                             double sigma, double lengthscale, double lo, double hi,
                             int rounds, double noise = 1e-4);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string details;

  /// "PASS <name> <details>" or "FAIL <name> <details>".
  std::string Line() const;
};

struct PitfallReport {
  std::vector<CheckResult> checks;
  bool AllPassed() const;
};

PitfallReport AssertPitfalls(const Demo1DProblem& problem);

}  // namespace molbo::pitfalls
