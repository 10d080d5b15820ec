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
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "molbo/chem/molecule.hpp"
#include "molbo/rng.hpp"

namespace molbo::ga {

struct GAConfig {
  int population_size = 100;
  int offspring_size = 200;
  int generations = 5;
  double mutation_rate = 0.2;
  int max_heavy_atoms = 100;
  std::uint64_t rng_seed = 0;
  /// Worker threads for scoring offspring; only used with pure score_fn.
  int num_threads = 1;

  /// Desk-scale defaults: population 100, offspring 200, 5 generations.
  static GAConfig Desk();
  /// Population 10^4, offspring 200, 5 generations.
  static GAConfig FullScale();

  void Validate() const;
};

struct PoolEntry {
  std::string key;
  chem::Molecule mol;
  double score = 0.0;
};

/// Molecules unique by canonical key, kept sorted by descending score with
/// the key as tie-break.
class ScoredPool {
 public:
  /// Returns false (and leaves the pool unchanged) if the key is present.
  bool Insert(PoolEntry entry);
  /// Builds the key itself.
  bool Insert(chem::Molecule mol, double score);

  bool Contains(const std::string& key) const { return keys_.contains(key); }
  const std::vector<PoolEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const PoolEntry& best() const { return entries_.front(); }

  /// First `n` entries (all if fewer).
  ScoredPool Top(std::size_t n) const;

 private:
  std::vector<PoolEntry> entries_;
  std::unordered_set<std::string> keys_;
};

/// Descending score, then ascending key.
bool PoolOrder(const PoolEntry& a, const PoolEntry& b);

/// Single acyclic bonds eligible for cutting.
std::vector<int> CuttableBonds(const chem::Molecule& mol);

/// Cuts each parent at a random non-ring single bond, then joins a random
/// fragment of each with a single bond between the cut atoms. Up to 20
/// attempts; nullopt if no valid child within the heavy-atom cap appears.
std::optional<chem::Molecule> Crossover(const chem::Molecule& a, const chem::Molecule& b,
                                        Rng& rng, int max_heavy_atoms = 100);

enum class MutationOp {
  kSubstituteElement,
  kIncrementBond,
  kDecrementBond,
  kAppendAtom,
  kDeleteAtom,
};

/// Applies one uniformly chosen operator (or `forced`), retrying up to 20
/// times until the result is valid and within the heavy-atom cap.
std::optional<chem::Molecule> Mutate(const chem::Molecule& mol, Rng& rng,
                                     int max_heavy_atoms = 100,
                                     std::optional<MutationOp> forced = std::nullopt);

using ScoreFn = std::function<double(const chem::Molecule&)>;

struct GAStats {
  int evaluations = 0;
  int empty_generations = 0;
  std::vector<double> best_per_generation;
};

/// Rank-weighted roulette selection, crossover then rate-gated mutation,
/// canonical dedup before scoring, truncation to population_size. Returns
/// every molecule seen (seeds included), sorted. New score_fn calls are
/// bounded by offspring_size * generations.
ScoredPool GaMaximize(const ScoreFn& score_fn, const ScoredPool& seed_pool,
                      const GAConfig& cfg, Rng& rng, GAStats* stats = nullptr);

}  // namespace molbo::ga
