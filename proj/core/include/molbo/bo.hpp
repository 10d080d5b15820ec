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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "molbo/acquisition.hpp"
#include "molbo/chem/fingerprint.hpp"
#include "molbo/chem/molecule.hpp"
#include "molbo/ga.hpp"
#include "molbo/gp.hpp"
#include "molbo/objectives.hpp"

namespace molbo::bo {

enum class AcquisitionMode {
  kUcbRandomBeta,
  kPi,
  kEi,
  /// Baseline: GA driven by a uniform random score; no surrogate.
  kRandom,
};

enum class FillStrategy { kPosteriorMean, kRandom, kNone };

std::string_view AcquisitionModeName(AcquisitionMode mode);
AcquisitionMode ParseAcquisitionMode(std::string_view text);
std::string_view FillStrategyName(FillStrategy fill);
FillStrategy ParseFillStrategy(std::string_view text);

struct BOConfig {
  gp::GPConfig gp{{gp::KernelKind::kTanimoto, 1.0, 1.0}, 1e-4, 0.0};
  int fp_radius = 2;
  chem::FpMode fp_mode = chem::FpMode::kCount;
  AcquisitionMode acquisition = AcquisitionMode::kUcbRandomBeta;
  acq::BetaSchedule beta;
  ga::GAConfig ga = ga::GAConfig::Desk();
  int n_init = 10;
  int bo_iterations = 100;
  int total_budget = 500;
  FillStrategy final_fill = FillStrategy::kPosteriorMean;
  std::uint64_t rng_seed = 0;
  /// GA warm start: best evaluated molecules plus best pooled candidates.
  int seed_evaluated = 100;
  int seed_pooled = 100;

  void Validate() const;
};

/// A GA-proposed molecule not (yet) sent to the oracle.
struct Candidate {
  std::string smiles;
  double last_acquisition = 0.0;
};

/// Mutable state of one run: oracle, evaluated dataset and candidate pool.
class BOState {
 public:
  BOState(const objectives::Objective& objective, const BOConfig& cfg);

  /// Scores `mol` (no-op on a known key) and adds it to the dataset.
  /// Returns false if the oracle budget is exhausted.
  bool Evaluate(const chem::Molecule& mol, const std::string& key,
                objectives::Provenance provenance);

  /// Records a proposal; evaluated keys are ignored.
  void AddCandidate(const std::string& key, std::string smiles, double acquisition);

  bool IsEvaluated(const std::string& key) const { return oracle_.IsCached(key); }
  gp::PosteriorState<chem::Fingerprint> FitSurrogate() const;

  const objectives::Oracle& oracle() const { return oracle_; }
  const std::vector<std::string>& keys() const { return keys_; }
  const std::vector<chem::Molecule>& molecules() const { return mols_; }
  const std::vector<chem::Fingerprint>& fingerprints() const { return fps_; }
  const std::vector<double>& scores() const { return scores_; }
  double y_best() const { return y_best_; }
  const std::map<std::string, Candidate>& pool() const { return pool_; }
  int gp_fits() const { return gp_fits_; }

 private:
  friend class Runner;

  const BOConfig* cfg_;
  objectives::Oracle oracle_;
  std::vector<std::string> keys_;
  std::vector<chem::Molecule> mols_;
  std::vector<chem::Fingerprint> fps_;
  std::vector<double> scores_;
  double y_best_ = 0.0;
  std::map<std::string, Candidate> pool_;
  mutable int gp_fits_ = 0;
};

struct RoundRecord {
  int round = 0;
  /// NaN unless the acquisition is UCB with a sampled beta.
  double beta = 0.0;
  std::string key;
  std::string smiles;
  double acquisition = 0.0;
  double score = 0.0;
  double y_best = 0.0;
  double amplitude = 0.0;
  double noise = 0.0;
  double jitter = 0.0;
  int gp_fits = 0;
  int ga_evaluations = 0;
  int candidates = 0;
  bool fallback = false;
};

void WriteRoundsJsonl(std::ostream& out, std::span<const RoundRecord> rounds);

/// Every unevaluated molecule the GA returned in a round with its
/// acquisition value, and the molecule picked.
struct RoundAudit {
  int round = 0;
  std::vector<std::pair<std::string, double>> candidates;
  std::string chosen;
  bool fallback = false;
};

struct FillReport {
  std::vector<std::string> evaluated;
  /// (key, posterior mean) for every unevaluated pool molecule considered;
  /// empty for the random strategy.
  std::vector<std::pair<std::string, double>> ranking;
};

struct RunResult {
  objectives::RunHistory history;
  std::vector<RoundRecord> rounds;
  FillReport fill;
  double y_best = 0.0;
  bool terminated_early = false;
  std::vector<std::string> log;
};

struct RunOptions {
  std::function<void(const RoundAudit&)> on_round;
};

/// Initial random sample, bo_iterations rounds of fit / acquire / evaluate,
/// then the final fill. Deterministic for a fixed cfg.rng_seed.
RunResult RunBo(const BOConfig& cfg, const objectives::Objective& objective,
                std::span<const chem::Molecule> seeds, const RunOptions& options = {});

/// Spends the remaining budget on unevaluated pool molecules, ranked by GP
/// posterior mean (ties by key) or sampled uniformly without replacement.
FillReport FinalFill(BOState& state, const BOConfig& cfg, Rng& rng);

}  // namespace molbo::bo
