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
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "molbo/chem/canon.hpp"
#include "molbo/chem/fingerprint.hpp"
#include "molbo/chem/molecule.hpp"

namespace molbo::objectives {

enum class Family { kRediscovery, kSimilarity, kMedian, kIsomer };

std::string_view FamilyName(Family family);
Family ParseFamily(std::string_view text);

struct ObjectiveSpec {
  std::string name;
  Family family = Family::kRediscovery;
  /// SMILES of the target(s): one for rediscovery/similarity, two for median.
  std::vector<std::string> targets;
  /// Target formula for the isomer family, e.g. "C7H8N2O2".
  std::string formula;
  int radius = 2;

  void Validate() const;
};

/// Fingerprint/formula-computable analogue of a benchmark objective.
/// Scores lie in [0, 1].
class Objective {
 public:
  explicit Objective(ObjectiveSpec spec);

  /// rediscovery / similarity: count Tanimoto to the target.
  /// median: geometric mean of the two target similarities.
  /// isomer: exp(-d/4), d = sum over elements (H included) of |count diff|.
  double Evaluate(const chem::Molecule& mol) const;

  const ObjectiveSpec& spec() const { return spec_; }
  const std::string& name() const { return spec_.name; }

 private:
  ObjectiveSpec spec_;
  std::vector<chem::Fingerprint> target_fps_;
  chem::Formula target_formula_;
};

/// Names accepted by BuiltinObjective.
std::vector<std::string> BuiltinObjectiveNames();
/// Throws InputError for unknown names.
ObjectiveSpec BuiltinObjective(std::string_view name);

/// SMILES for Celecoxib (Kekule form).
inline constexpr std::string_view kCelecoxibSmiles =
    "CC1=CC=C(C=C1)C1=CC(=NN1C1=CC=C(C=C1)S(N)(=O)=O)C(F)(F)F";

enum class Provenance { kInit, kBo, kFill };

std::string_view ProvenanceName(Provenance p);
Provenance ParseProvenance(std::string_view text);

struct HistoryEntry {
  int call_index = 0;
  std::string key;
  std::string smiles;
  double score = 0.0;
  Provenance provenance = Provenance::kInit;
  /// Mean of the (up to) 10 best scores after this call.
  double top10_mean = 0.0;
};

/// Ordered log of budget-consuming oracle calls.
class RunHistory {
 public:
  void Append(std::string key, std::string smiles, double score, Provenance provenance);

  const std::vector<HistoryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::vector<double> Scores() const;
  double BestScore() const;

  /// One JSON object per line with fields call_index, key, smiles, score,
  /// provenance, top10_mean.
  void WriteJsonl(std::ostream& out) const;
  static RunHistory ReadJsonl(std::istream& in);

 private:
  std::vector<HistoryEntry> entries_;
  std::vector<double> top_;  // descending, at most 10
};

struct OracleResult {
  double score = 0.0;
  bool cache_hit = false;
};

/// Budgeted, caching wrapper around an objective. Budget counts distinct
/// canonical keys.
class Oracle {
 public:
  Oracle(const Objective& objective, int budget);

  /// Throws BudgetExhausted for an uncached molecule when no budget is left.
  OracleResult Call(const chem::Molecule& mol, Provenance provenance);
  OracleResult Call(const chem::Molecule& mol, const std::string& key,
                    Provenance provenance);

  bool IsCached(const std::string& key) const { return cache_.contains(key); }
  std::optional<double> Cached(const std::string& key) const;
  int budget() const { return budget_; }
  int calls_used() const { return calls_used_; }
  int remaining() const { return budget_ - calls_used_; }
  const RunHistory& history() const { return history_; }
  const Objective& objective() const { return *objective_; }

 private:
  const Objective* objective_;
  int budget_;
  int calls_used_ = 0;
  std::unordered_map<std::string, double> cache_;
  RunHistory history_;
};

/// Budget-normalized area under the running top-k mean curve:
/// (sum_{t<=T} m_t + (budget - T) m_T) / budget, m_t averaging the k best
/// of the first t scores (fewer when t < k). Throws InputError when
/// budget < T or the history is empty.
double AucTopK(std::span<const double> scores, int k, int budget);
double AucTopK(const RunHistory& history, int k, int budget);

struct SummaryRow {
  std::string objective;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single seed
  int seeds = 0;
};

struct SummaryTable {
  std::vector<SummaryRow> rows;
  double sum_of_means = 0.0;

  /// Aligned, human-readable table with a trailing "Sum" row.
  std::string Format() const;
  /// Tab-separated with a header row: objective, mean, std, seeds.
  std::string ToTsv() const;
};

SummaryTable SummarizeRuns(const std::map<std::string, std::vector<double>>& per_seed_aucs);

}  // namespace molbo::objectives
