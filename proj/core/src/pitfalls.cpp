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

#include "molbo/pitfalls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "molbo/error.hpp"
#include "molbo/gp.hpp"

namespace molbo::pitfalls {
namespace {

constexpr double kProbeX = 0.85;
constexpr double kClusterLo = 0.05;
constexpr double kClusterHi = 0.35;
constexpr int kSearchRounds = 10;

gp::PosteriorState<gp::RealVector> FitRbf(std::span<const double> xs, std::span<const double> ys,
                                          double sigma, double lengthscale, double noise) {
  gp::GPConfig cfg;
  cfg.kernel = {gp::KernelKind::kRbf, sigma, lengthscale};
  cfg.noise_variance = noise;
  std::vector<gp::RealVector> inputs;
  inputs.reserve(xs.size());
  for (double x : xs) inputs.push_back({x});
  return gp::PosteriorState<gp::RealVector>::Fit(std::move(inputs),
                                                 std::vector<double>(ys.begin(), ys.end()), cfg);
}

// Shortest decimal form, so 1.0 prints as "1" and 0.05 as "0.05".
std::string Num(double v) { return fmt::format("{}", v); }

}  // namespace

double TargetFunction1d(double x) {
  const double a = (x - 0.2) / 0.08;
  const double b = (x - 0.85) / 0.05;
  return 0.5 * std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b);
}

Demo1DProblem Demo1DProblem::Default(int grid_points) {
  if (grid_points < 2) throw InputError("grid needs at least 2 points");
  Demo1DProblem p;
  p.train_x = {0.06, 0.12, 0.18, 0.24, 0.30, 0.35};
  for (double x : p.train_x) p.train_y.push_back(TargetFunction1d(x));
  p.grid.resize(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    p.grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / (grid_points - 1);
  }
  return p;
}

void Demo1DProblem::Validate() const {
  if (train_x.empty() || train_x.size() != train_y.size()) {
    throw InputError("training inputs and labels must be nonempty and equal length");
  }
  if (grid.empty()) throw InputError("empty grid");
  for (double x : train_x) {
    if (x < kClusterLo || x > kClusterHi) {
      throw InputError(fmt::format("training point {} outside [0.05, 0.35]", x));
    }
  }
}

std::string Sweep::FileName() const {
  return fmt::format("sweep_sigma{}_ell{}.csv", Num(sigma), Num(lengthscale));
}

void Sweep::WriteCsv(std::ostream& out) const {
  out << "x,mean,std,pi,ei,ucb\n";
  for (const auto& r : rows) {
    out << fmt::format("{:.6f},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.x, r.mean, r.std,
                       r.pi, r.ei, r.ucb);
  }
}

const SweepRow& Sweep::At(double x) const {
  if (rows.empty()) throw InputError("empty sweep");
  const auto it = std::min_element(rows.begin(), rows.end(), [x](const auto& a, const auto& b) {
    return std::abs(a.x - x) < std::abs(b.x - x);
  });
  return *it;
}

Sweep SweepPair(const Demo1DProblem& problem, double sigma, double lengthscale, double noise) {
  problem.Validate();
  const auto post = FitRbf(problem.train_x, problem.train_y, sigma, lengthscale, noise);
  Sweep s;
  s.sigma = sigma;
  s.lengthscale = lengthscale;
  s.noise = noise;
  s.y_best = *std::max_element(problem.train_y.begin(), problem.train_y.end());
  s.rows.reserve(problem.grid.size());
  for (double x : problem.grid) {
    const auto p = post.Predict({x});
    const double sd = p.Std();
    s.rows.push_back({x, p.mean, sd, acq::ProbImprovement(p.mean, sd, s.y_best),
                      acq::ExpectedImprovement(p.mean, sd, s.y_best), acq::Ucb(p.mean, sd, 1.0)});
  }
  return s;
}

std::vector<Sweep> RunSweeps(const Demo1DProblem& problem, std::span<const double> sigmas,
                             std::span<const double> lengthscales, double noise) {
  std::vector<Sweep> out;
  for (double s : sigmas) {
    for (double l : lengthscales) out.push_back(SweepPair(problem, s, l, noise));
  }
  return out;
}

std::size_t ArgmaxInRange(const Sweep& sweep, double SweepRow::*column, double lo, double hi) {
  std::size_t best = sweep.rows.size();
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    const auto& r = sweep.rows[i];
    if (r.x < lo || r.x > hi) continue;
    if (best == sweep.rows.size() || r.*column > sweep.rows[best].*column) best = i;
  }
  if (best == sweep.rows.size()) throw InputError("no grid point in range");
  return best;
}

SearchTrace SequentialSearch(const Demo1DProblem& problem, acq::AcquisitionKind kind,
                             double sigma, double lengthscale, double lo, double hi, int rounds,
                             double noise) {
  problem.Validate();
  std::vector<double> xs = problem.train_x;
  std::vector<double> ys = problem.train_y;
  std::vector<bool> used(problem.grid.size(), false);
  for (std::size_t i = 0; i < problem.grid.size(); ++i) {
    for (double x : xs) {
      if (std::abs(problem.grid[i] - x) < 1e-12) used[i] = true;
    }
  }

  SearchTrace trace;
  for (int round = 0; round < rounds; ++round) {
    const auto post = FitRbf(xs, ys, sigma, lengthscale, noise);
    acq::AcquisitionSpec spec;
    spec.kind = kind;
    spec.y_best = *std::max_element(ys.begin(), ys.end());
    spec.beta = 1.0;
    std::size_t pick = problem.grid.size();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < problem.grid.size(); ++i) {
      const double x = problem.grid[i];
      if (used[i] || x < lo || x > hi) continue;
      const auto p = post.Predict({x});
      const double a = spec(p.mean, p.Std());
      if (a > best) {
        best = a;
        pick = i;
      }
    }
    if (pick == problem.grid.size()) break;
    used[pick] = true;
    xs.push_back(problem.grid[pick]);
    ys.push_back(TargetFunction1d(problem.grid[pick]));
    trace.picks.push_back(problem.grid[pick]);
  }
  trace.best_g = *std::max_element(ys.begin(), ys.end());
  return trace;
}

std::string CheckResult::Line() const {
  return fmt::format("{} {} {}", passed ? "PASS" : "FAIL", name, details);
}

bool PitfallReport::AllPassed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

PitfallReport AssertPitfalls(const Demo1DProblem& problem) {
  PitfallReport report;

  // Prior width: a narrow prior cannot reach the far optimum.
  const auto narrow = SweepPair(problem, 0.1, 0.05);
  const auto wide = SweepPair(problem, 1.0, 0.05);
  {
    const double lo = narrow.At(kProbeX).pi;
    const double hi = wide.At(kProbeX).pi;
    report.checks.push_back({"pi_prior_width", lo < hi,
                             fmt::format("PI(0.85) sigma=0.1: {:.6g} sigma=1.0: {:.6g}", lo, hi)});
  }
  {
    const double lo = narrow.At(kProbeX).std;
    const double hi = wide.At(kProbeX).std;
    report.checks.push_back({"std_prior_width", lo < hi,
                             fmt::format("std(0.85) sigma=0.1: {:.6g} sigma=1.0: {:.6g}", lo, hi)});
  }

  // Over-smoothing: long lengthscales collapse the uncertainty far away.
  for (double ell : {5.0, 50.0}) {
    const auto smooth = SweepPair(problem, 1.0, ell);
    const double lo = smooth.At(kProbeX).std;
    const double hi = wide.At(kProbeX).std;
    report.checks.push_back({fmt::format("std_lengthscale_{}", Num(ell)), lo < hi,
                             fmt::format("std(0.85) ell={}: {:.6g} ell=0.05: {:.6g}", Num(ell), lo,
                                         hi)});
  }

  // Under-exploration signature of the narrow prior.
  {
    const auto i = ArgmaxInRange(narrow, &SweepRow::pi, 0.0, 1.0);
    const double x = narrow.rows[i].x;
    double gap = std::numeric_limits<double>::infinity();
    for (double t : problem.train_x) gap = std::min(gap, std::abs(x - t));
    report.checks.push_back({"pi_argmax_near_cluster_sigma0.1", gap <= 0.1,
                             fmt::format("argmax x={:.4f} distance to data {:.4f}", x, gap)});
  }

  // Search-space restriction: sequential EI over the whole grid finds the
  // far optimum, the same loop confined to [0, 0.4] cannot.
  {
    const auto full =
        SequentialSearch(problem, acq::AcquisitionKind::kEi, 1.0, 0.05, 0.0, 1.0, kSearchRounds);
    const auto restricted =
        SequentialSearch(problem, acq::AcquisitionKind::kEi, 1.0, 0.05, 0.0, 0.4, kSearchRounds);
    report.checks.push_back(
        {"restricted_search_worse", restricted.best_g < full.best_g,
         fmt::format("EI x{} rounds best g full: {:.6g} restricted [0,0.4]: {:.6g}",
                     kSearchRounds, full.best_g, restricted.best_g)});
  }
  return report;
}

}  // namespace molbo::pitfalls
