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

#include "molbo/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "molbo/chem/smiles.hpp"
#include "molbo/error.hpp"

namespace molbo::objectives {
namespace {

struct Builtin {
  std::string_view name;
  Family family;
  std::vector<std::string_view> targets;
  std::string_view formula;
};

const std::vector<Builtin>& Builtins() {
  static const std::vector<Builtin> kBuiltins{
      {"celecoxib_rediscovery", Family::kRediscovery, {kCelecoxibSmiles}, ""},
      {"troglitazone_rediscovery",
       Family::kRediscovery,
       {"CC1=C(C)C2=C(CCC(C)(COC3=CC=C(CC4SC(=O)NC4=O)C=C3)O2)C(C)=C1O"},
       ""},
      {"thiothixene_rediscovery",
       Family::kRediscovery,
       {"CN1CCN(CCC=C2C3=CC=CC=C3SC3=C2C=C(C=C3)S(=O)(=O)N(C)C)CC1"},
       ""},
      {"albuterol_similarity",
       Family::kSimilarity,
       {"CC(C)(C)NCC(O)C1=CC(CO)=C(O)C=C1"},
       ""},
      {"mestranol_similarity",
       Family::kSimilarity,
       {"COC1=CC2=C(C=C1)C1CCC3(C)C(CCC3(O)C#C)C1CC2"},
       ""},
      {"median1",
       Family::kMedian,
       {"CC1(C)C2CCC1(C)C(=O)C2", "CC(C)C1CCC(C)CC1O"},
       ""},
      {"median2",
       Family::kMedian,
       {"CN1CC(=O)N2C(CC3=C(NC4=CC=CC=C34)C2C2=CC3=C(OCO3)C=C2)C1=O",
        "CCCC1=NN(C)C2=C1N=C(NC2=O)C1=C(OCC)C=CC(=C1)S(=O)(=O)N1CCN(C)CC1"},
       ""},
      {"isomers_c7h8n2o2", Family::kIsomer, {}, "C7H8N2O2"},
      {"isomers_c9h10n2o2pf2cl", Family::kIsomer, {}, "C9H10N2O2PF2Cl"},
  };
  return kBuiltins;
}

}  // namespace

std::string_view FamilyName(Family family) {
  switch (family) {
    case Family::kRediscovery:
      return "rediscovery";
    case Family::kSimilarity:
      return "similarity";
    case Family::kMedian:
      return "median";
    case Family::kIsomer:
      return "isomer";
  }
  return "?";
}

Family ParseFamily(std::string_view text) {
  for (Family f : {Family::kRediscovery, Family::kSimilarity, Family::kMedian,
                   Family::kIsomer}) {
    if (FamilyName(f) == text) return f;
  }
  throw InputError(fmt::format("unknown objective family '{}'", text));
}

void ObjectiveSpec::Validate() const {
  const std::size_t want = family == Family::kMedian   ? 2
                           : family == Family::kIsomer ? 0
                                                       : 1;
  if (targets.size() != want) {
    throw InputError(fmt::format("{} objective needs {} target(s), got {}",
                                 FamilyName(family), want, targets.size()));
  }
  if (family == Family::kIsomer && formula.empty()) {
    throw InputError("isomer objective needs a target formula");
  }
  if (radius < 0 || radius > chem::kMaxFingerprintRadius) {
    throw InputError(fmt::format("objective radius {} out of range", radius));
  }
}

Objective::Objective(ObjectiveSpec spec) : spec_(std::move(spec)) {
  spec_.Validate();
  for (const auto& smi : spec_.targets) {
    target_fps_.push_back(chem::MorganFingerprint(chem::ParseSmiles(smi), spec_.radius,
                                                  chem::FpMode::kCount));
  }
  if (spec_.family == Family::kIsomer) target_formula_ = chem::ParseFormula(spec_.formula);
}

double Objective::Evaluate(const chem::Molecule& mol) const {
  switch (spec_.family) {
    case Family::kRediscovery:
    case Family::kSimilarity: {
      const auto fp = chem::MorganFingerprint(mol, spec_.radius, chem::FpMode::kCount);
      return chem::Tanimoto(fp, target_fps_[0]);
    }
    case Family::kMedian: {
      const auto fp = chem::MorganFingerprint(mol, spec_.radius, chem::FpMode::kCount);
      return std::sqrt(chem::Tanimoto(fp, target_fps_[0]) *
                       chem::Tanimoto(fp, target_fps_[1]));
    }
    case Family::kIsomer: {
      const chem::Formula f = chem::MolecularFormula(mol);
      int diff = 0;
      for (const auto& [sym, count] : f) {
        auto it = target_formula_.find(sym);
        diff += std::abs(count - (it == target_formula_.end() ? 0 : it->second));
      }
      for (const auto& [sym, count] : target_formula_) {
        if (!f.contains(sym)) diff += count;
      }
      return std::exp(-static_cast<double>(diff) / 4.0);
    }
  }
  return 0.0;
}

std::vector<std::string> BuiltinObjectiveNames() {
  std::vector<std::string> out;
  for (const auto& b : Builtins()) out.emplace_back(b.name);
  return out;
}

ObjectiveSpec BuiltinObjective(std::string_view name) {
  for (const auto& b : Builtins()) {
    if (b.name != name) continue;
    ObjectiveSpec s;
    s.name = std::string(b.name);
    s.family = b.family;
    for (auto t : b.targets) s.targets.emplace_back(t);
    s.formula = std::string(b.formula);
    return s;
  }
  throw InputError(fmt::format("unknown objective '{}'", name));
}

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kInit:
      return "init";
    case Provenance::kBo:
      return "bo";
    case Provenance::kFill:
      return "fill";
  }
  return "?";
}

Provenance ParseProvenance(std::string_view text) {
  for (Provenance p : {Provenance::kInit, Provenance::kBo, Provenance::kFill}) {
    if (ProvenanceName(p) == text) return p;
  }
  throw InputError(fmt::format("unknown provenance '{}'", text));
}

void RunHistory::Append(std::string key, std::string smiles, double score,
                        Provenance provenance) {
  top_.insert(std::upper_bound(top_.begin(), top_.end(), score, std::greater<>()), score);
  if (top_.size() > 10) top_.pop_back();
  HistoryEntry e;
  e.call_index = static_cast<int>(entries_.size()) + 1;
  e.key = std::move(key);
  e.smiles = std::move(smiles);
  e.score = score;
  e.provenance = provenance;
  e.top10_mean = std::accumulate(top_.begin(), top_.end(), 0.0) /
                 static_cast<double>(top_.size());
  entries_.push_back(std::move(e));
}

std::vector<double> RunHistory::Scores() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.score);
  return out;
}

double RunHistory::BestScore() const { return top_.empty() ? 0.0 : top_.front(); }

void RunHistory::WriteJsonl(std::ostream& out) const {
  for (const auto& e : entries_) {
    nlohmann::ordered_json j;
    j["call_index"] = e.call_index;
    j["key"] = e.key;
    j["smiles"] = e.smiles;
    j["score"] = e.score;
    j["provenance"] = ProvenanceName(e.provenance);
    j["top10_mean"] = e.top10_mean;
    out << j.dump() << '\n';
  }
}

RunHistory RunHistory::ReadJsonl(std::istream& in) {
  RunHistory h;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      h.Append(j.at("key").get<std::string>(), j.at("smiles").get<std::string>(),
               j.at("score").get<double>(),
               ParseProvenance(j.at("provenance").get<std::string>()));
      if (h.entries_.back().call_index != j.at("call_index").get<int>()) {
        throw InputError("call_index out of sequence");
      }
    } catch (const nlohmann::json::exception& e) {
      throw InputError(fmt::format("history line {}: {}", number, e.what()));
    }
  }
  return h;
}

Oracle::Oracle(const Objective& objective, int budget)
    : objective_(&objective), budget_(budget) {
  if (budget < 1) throw InputError("oracle budget must be >= 1");
}

OracleResult Oracle::Call(const chem::Molecule& mol, Provenance provenance) {
  return Call(mol, chem::CanonicalKey(mol), provenance);
}

OracleResult Oracle::Call(const chem::Molecule& mol, const std::string& key,
                          Provenance provenance) {
  if (auto it = cache_.find(key); it != cache_.end()) return {it->second, true};
  if (calls_used_ >= budget_) {
    throw BudgetExhausted(fmt::format("oracle budget of {} calls exhausted", budget_));
  }
  const double score = objective_->Evaluate(mol);
  cache_.emplace(key, score);
  ++calls_used_;
  history_.Append(key, chem::WriteSmiles(mol), score, provenance);
  return {score, false};
}

std::optional<double> Oracle::Cached(const std::string& key) const {
  auto it = cache_.find(key);
  if (it == cache_.end()) return std::nullopt;
  return it->second;
}

double AucTopK(std::span<const double> scores, int k, int budget) {
  if (scores.empty()) throw InputError("AUC of an empty history");
  if (k < 1) throw InputError("AUC top-k needs k >= 1");
  const auto calls = static_cast<int>(scores.size());
  if (budget < calls) {
    throw InputError(fmt::format("budget {} smaller than {} calls", budget, calls));
  }
  // Accumulated as offsets from the first score so a constant history
  // returns that constant exactly.
  const double ref = scores.front();
  std::vector<double> top;  // descending
  double area = 0.0;
  double current = 0.0;
  for (double s : scores) {
    top.insert(std::upper_bound(top.begin(), top.end(), s, std::greater<>()), s);
    if (static_cast<int>(top.size()) > k) top.pop_back();
    double offset = 0.0;
    for (double v : top) offset += v - ref;
    current = offset / static_cast<double>(top.size());
    area += current;
  }
  area += static_cast<double>(budget - calls) * current;
  return ref + area / static_cast<double>(budget);
}

double AucTopK(const RunHistory& history, int k, int budget) {
  const auto scores = history.Scores();
  return AucTopK(std::span<const double>(scores), k, budget);
}

SummaryTable SummarizeRuns(const std::map<std::string, std::vector<double>>& per_seed_aucs) {
  SummaryTable t;
  for (const auto& [name, values] : per_seed_aucs) {
    if (values.empty()) throw InputError(fmt::format("objective '{}' has no seeds", name));
    SummaryRow row;
    row.objective = name;
    row.seeds = static_cast<int>(values.size());
    row.mean = std::accumulate(values.begin(), values.end(), 0.0) /
               static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - row.mean) * (v - row.mean);
      row.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    t.sum_of_means += row.mean;
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string SummaryTable::Format() const {
  std::size_t width = 3;
  for (const auto& r : rows) width = std::max(width, r.objective.size());
  std::string out = fmt::format("{:<{}}  {:>16}  {:>5}\n", "objective", width,
                                "AUC top-10", "seeds");
  out += std::string(width + 25, '-') + "\n";
  for (const auto& r : rows) {
    out += fmt::format("{:<{}}  {:>7.3f} +- {:>5.3f}  {:>5}\n", r.objective, width, r.mean,
                       r.std, r.seeds);
  }
  out += std::string(width + 25, '-') + "\n";
  out += fmt::format("{:<{}}  {:>7.3f}\n", "Sum", width, sum_of_means);
  return out;
}

std::string SummaryTable::ToTsv() const {
  std::string out = "objective\tmean\tstd\tseeds\n";
  for (const auto& r : rows) {
    out += fmt::format("{}\t{:.6f}\t{:.6f}\t{}\n", r.objective, r.mean, r.std, r.seeds);
  }
  out += fmt::format("Sum\t{:.6f}\t\t\n", sum_of_means);
  return out;
}

}  // namespace molbo::objectives
