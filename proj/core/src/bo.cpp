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

#include "molbo/bo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "molbo/chem/canon.hpp"
#include "molbo/chem/smiles.hpp"
#include "molbo/error.hpp"

namespace molbo::bo {
namespace {

// Stream ids for DeriveSeed; one per consumer of randomness.
enum Stream : std::uint64_t {
  kInitStream = 1,
  kBetaStream = 2,
  kGaStream = 3,
  kFillStream = 4,
  kRandomScoreStream = 5,
};

struct Scored {
  std::string key;
  double value;
};

bool ScoredOrder(const Scored& a, const Scored& b) {
  if (a.value != b.value) return a.value > b.value;
  return a.key < b.key;
}

}  // namespace

std::string_view AcquisitionModeName(AcquisitionMode mode) {
  switch (mode) {
    case AcquisitionMode::kUcbRandomBeta:
      return "ucb_random_beta";
    case AcquisitionMode::kPi:
      return "pi";
    case AcquisitionMode::kEi:
      return "ei";
    case AcquisitionMode::kRandom:
      return "random";
  }
  return "?";
}

AcquisitionMode ParseAcquisitionMode(std::string_view text) {
  for (auto m : {AcquisitionMode::kUcbRandomBeta, AcquisitionMode::kPi,
                 AcquisitionMode::kEi, AcquisitionMode::kRandom}) {
    if (AcquisitionModeName(m) == text) return m;
  }
  throw InputError(fmt::format("unknown acquisition '{}'", text));
}

std::string_view FillStrategyName(FillStrategy fill) {
  switch (fill) {
    case FillStrategy::kPosteriorMean:
      return "posterior_mean";
    case FillStrategy::kRandom:
      return "random";
    case FillStrategy::kNone:
      return "none";
  }
  return "?";
}

FillStrategy ParseFillStrategy(std::string_view text) {
  for (auto f : {FillStrategy::kPosteriorMean, FillStrategy::kRandom, FillStrategy::kNone}) {
    if (FillStrategyName(f) == text) return f;
  }
  throw InputError(fmt::format("unknown final_fill '{}'", text));
}

void BOConfig::Validate() const {
  gp.Validate();
  if (gp.kernel.kind != gp::KernelKind::kTanimoto) {
    throw InputError("molecular BO requires the tanimoto kernel");
  }
  if (fp_radius < 0 || fp_radius > chem::kMaxFingerprintRadius) {
    throw InputError(fmt::format("fingerprint radius {} out of range", fp_radius));
  }
  beta.Validate();
  ga.Validate();
  if (n_init < 1) throw InputError("n_init must be >= 1");
  if (bo_iterations < 0) throw InputError("bo_iterations must be >= 0");
  if (n_init + bo_iterations > total_budget) {
    throw InputError(fmt::format("n_init ({}) + bo_iterations ({}) exceeds total_budget ({})",
                                 n_init, bo_iterations, total_budget));
  }
  if (seed_evaluated < 0 || seed_pooled < 0 || seed_evaluated + seed_pooled < 1) {
    throw InputError("GA seed counts must be >= 0 and not both zero");
  }
}

BOState::BOState(const objectives::Objective& objective, const BOConfig& cfg)
    : cfg_(&cfg), oracle_(objective, cfg.total_budget) {}

bool BOState::Evaluate(const chem::Molecule& mol, const std::string& key,
                       objectives::Provenance provenance) {
  if (oracle_.IsCached(key)) return true;
  if (oracle_.remaining() <= 0) return false;
  const auto result = oracle_.Call(mol, key, provenance);
  keys_.push_back(key);
  mols_.push_back(mol);
  fps_.push_back(chem::MorganFingerprint(mol, cfg_->fp_radius, cfg_->fp_mode));
  scores_.push_back(result.score);
  y_best_ = scores_.size() == 1 ? result.score : std::max(y_best_, result.score);
  pool_.erase(key);
  return true;
}

void BOState::AddCandidate(const std::string& key, std::string smiles, double acquisition) {
  if (oracle_.IsCached(key)) return;
  auto& c = pool_[key];
  c.smiles = std::move(smiles);
  c.last_acquisition = acquisition;
}

gp::PosteriorState<chem::Fingerprint> BOState::FitSurrogate() const {
  ++gp_fits_;
  return gp::PosteriorState<chem::Fingerprint>::Fit(fps_, scores_, cfg_->gp);
}

void WriteRoundsJsonl(std::ostream& out, std::span<const RoundRecord> rounds) {
  for (const auto& r : rounds) {
    nlohmann::ordered_json j;
    j["round"] = r.round;
    if (std::isnan(r.beta)) {
      j["beta"] = nullptr;
    } else {
      j["beta"] = r.beta;
    }
    j["key"] = r.key;
    j["smiles"] = r.smiles;
    j["acquisition"] = r.acquisition;
    j["score"] = r.score;
    j["y_best"] = r.y_best;
    j["amplitude"] = r.amplitude;
    j["noise"] = r.noise;
    j["jitter"] = r.jitter;
    j["gp_fits"] = r.gp_fits;
    j["ga_evaluations"] = r.ga_evaluations;
    j["candidates"] = r.candidates;
    j["fallback"] = r.fallback;
    out << j.dump() << '\n';
  }
}

FillReport FinalFill(BOState& state, const BOConfig& cfg, Rng& rng) {
  FillReport report;
  const int remaining = state.oracle().remaining();
  if (remaining <= 0 || cfg.final_fill == FillStrategy::kNone || state.pool().empty()) {
    return report;
  }

  std::vector<std::string> order;
  if (cfg.final_fill == FillStrategy::kPosteriorMean) {
    if (state.scores().empty()) return report;
    const auto surrogate = state.FitSurrogate();
    std::vector<Scored> ranked;
    ranked.reserve(state.pool().size());
    for (const auto& [key, cand] : state.pool()) {
      const auto mol = chem::ParseSmiles(cand.smiles);
      const auto fp = chem::MorganFingerprint(mol, cfg.fp_radius, cfg.fp_mode);
      ranked.push_back({key, surrogate.PredictMean(fp)});
    }
    std::sort(ranked.begin(), ranked.end(), ScoredOrder);
    for (const auto& s : ranked) {
      report.ranking.emplace_back(s.key, s.value);
      order.push_back(s.key);
    }
  } else {
    for (const auto& [key, cand] : state.pool()) order.push_back(key);
    // Partial Fisher-Yates: only the first `remaining` positions matter.
    const std::size_t take = std::min<std::size_t>(order.size(), static_cast<std::size_t>(remaining));
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + rng.UniformIndex(order.size() - i);
      std::swap(order[i], order[j]);
    }
    order.resize(take);
  }

  for (const auto& key : order) {
    if (state.oracle().remaining() <= 0) break;
    // Copy: Evaluate erases the pool entry.
    const std::string smiles = state.pool().at(key).smiles;
    const auto mol = chem::ParseSmiles(smiles);
    state.Evaluate(mol, key, objectives::Provenance::kFill);
    report.evaluated.push_back(key);
  }
  return report;
}

RunResult RunBo(const BOConfig& cfg, const objectives::Objective& objective,
                std::span<const chem::Molecule> seeds, const RunOptions& options) {
  cfg.Validate();
  if (static_cast<int>(seeds.size()) < cfg.n_init) {
    throw InputError(fmt::format("{} seed molecules but n_init = {}", seeds.size(), cfg.n_init));
  }

  RunResult result;
  BOState state(objective, cfg);

  // Initial design: uniform sample without replacement.
  {
    Rng rng(DeriveSeed(cfg.rng_seed, {kInitStream}));
    std::vector<std::size_t> idx(seeds.size());
    std::iota(idx.begin(), idx.end(), 0);
    int taken = 0;
    for (std::size_t i = 0; i < idx.size() && taken < cfg.n_init; ++i) {
      const std::size_t j = i + rng.UniformIndex(idx.size() - i);
      std::swap(idx[i], idx[j]);
      const auto& mol = seeds[idx[i]];
      const std::string key = chem::CanonicalKey(mol);
      if (state.IsEvaluated(key)) continue;
      state.Evaluate(mol, key, objectives::Provenance::kInit);
      ++taken;
    }
  }

  Rng beta_rng(DeriveSeed(cfg.rng_seed, {kBetaStream}));
  Rng ga_rng(DeriveSeed(cfg.rng_seed, {kGaStream}));
  const bool random_mode = cfg.acquisition == AcquisitionMode::kRandom;

  for (int round = 1; round <= cfg.bo_iterations; ++round) {
    if (state.oracle().remaining() <= 0) {
      result.log.push_back(fmt::format("round {}: budget exhausted", round));
      break;
    }
    RoundRecord rec;
    rec.round = round;
    rec.beta = std::numeric_limits<double>::quiet_NaN();

    const int fits_before = state.gp_fits();
    std::optional<gp::PosteriorState<chem::Fingerprint>> surrogate;
    acq::AcquisitionSpec spec;
    if (!random_mode) {
      surrogate.emplace(state.FitSurrogate());
      rec.amplitude = cfg.gp.kernel.amplitude;
      rec.noise = cfg.gp.noise_variance;
      rec.jitter = surrogate->jitter();
      switch (cfg.acquisition) {
        case AcquisitionMode::kUcbRandomBeta:
          spec.kind = acq::AcquisitionKind::kUcb;
          spec.beta = acq::SampleBeta(cfg.beta, beta_rng);
          rec.beta = spec.beta;
          break;
        case AcquisitionMode::kPi:
          spec.kind = acq::AcquisitionKind::kPi;
          spec.y_best = state.y_best();
          break;
        default:
          spec.kind = acq::AcquisitionKind::kEi;
          spec.y_best = state.y_best();
          break;
      }
    }
    const std::uint64_t random_seed =
        DeriveSeed(cfg.rng_seed, {kRandomScoreStream, static_cast<std::uint64_t>(round)});

    // The random baseline hashes the fingerprint: order-invariant like the
    // canonical key, and much cheaper to compute.
    auto acquisition_of = [&](const chem::Molecule& mol) {
      const auto fp = chem::MorganFingerprint(mol, cfg.fp_radius, cfg.fp_mode);
      if (random_mode) {
        std::uint64_t h = random_seed;
        for (const auto& [id, count] : fp.entries()) h = HashCombine(HashCombine(h, id), count);
        return static_cast<double>(h >> 11) * 0x1.0p-53;
      }
      const auto p = surrogate->Predict(fp);
      return spec(p.mean, p.Std());
    };
    const ga::ScoreFn score_fn = acquisition_of;

    // Warm start from the best evaluated molecules and the best pooled
    // candidates, rescored under this round's acquisition.
    ga::ScoredPool seed_pool;
    {
      std::vector<std::size_t> by_score(state.scores().size());
      std::iota(by_score.begin(), by_score.end(), 0);
      std::sort(by_score.begin(), by_score.end(), [&](std::size_t a, std::size_t b) {
        if (state.scores()[a] != state.scores()[b]) return state.scores()[a] > state.scores()[b];
        return state.keys()[a] < state.keys()[b];
      });
      const std::size_t n_eval =
          std::min(by_score.size(), static_cast<std::size_t>(cfg.seed_evaluated));
      for (std::size_t i = 0; i < n_eval; ++i) {
        const std::size_t d = by_score[i];
        seed_pool.Insert({state.keys()[d], state.molecules()[d],
                          acquisition_of(state.molecules()[d])});
      }
      std::vector<Scored> pooled;
      pooled.reserve(state.pool().size());
      for (const auto& [key, cand] : state.pool()) pooled.push_back({key, cand.last_acquisition});
      const std::size_t n_pool =
          std::min(pooled.size(), static_cast<std::size_t>(cfg.seed_pooled));
      std::partial_sort(pooled.begin(), pooled.begin() + static_cast<std::ptrdiff_t>(n_pool),
                        pooled.end(), ScoredOrder);
      for (std::size_t i = 0; i < n_pool; ++i) {
        auto mol = chem::ParseSmiles(state.pool().at(pooled[i].key).smiles);
        const double a = acquisition_of(mol);
        seed_pool.Insert({pooled[i].key, std::move(mol), a});
      }
    }

    ga::GAConfig ga_cfg = cfg.ga;
    ga_cfg.rng_seed = DeriveSeed(cfg.rng_seed, {kGaStream, static_cast<std::uint64_t>(round)});
    ga::GAStats stats;
    const ga::ScoredPool proposals = ga::GaMaximize(score_fn, seed_pool, ga_cfg, ga_rng, &stats);
    rec.ga_evaluations = stats.evaluations;

    RoundAudit audit;
    audit.round = round;
    const ga::PoolEntry* chosen = nullptr;
    for (const auto& e : proposals.entries()) {
      if (state.IsEvaluated(e.key)) continue;
      audit.candidates.emplace_back(e.key, e.score);
      if (!chosen) chosen = &e;  // pool order: max acquisition, ties by key
      state.AddCandidate(e.key, chem::WriteSmiles(e.mol), e.score);
    }
    rec.candidates = static_cast<int>(audit.candidates.size());

    std::optional<chem::Molecule> pick;
    std::string pick_key;
    if (chosen) {
      pick = chosen->mol;
      pick_key = chosen->key;
      rec.acquisition = chosen->score;
    } else if (!state.pool().empty()) {
      std::vector<Scored> pooled;
      for (const auto& [key, cand] : state.pool()) pooled.push_back({key, cand.last_acquisition});
      const auto best = std::min_element(pooled.begin(), pooled.end(), ScoredOrder);
      pick_key = best->key;
      pick = chem::ParseSmiles(state.pool().at(pick_key).smiles);
      rec.acquisition = best->value;
      rec.fallback = true;
      result.log.push_back(
          fmt::format("round {}: GA returned no unevaluated molecule; using pool", round));
    } else {
      result.log.push_back(
          fmt::format("round {}: no unevaluated molecule anywhere; stopping", round));
      result.terminated_early = true;
      break;
    }

    audit.chosen = pick_key;
    audit.fallback = rec.fallback;
    if (options.on_round) options.on_round(audit);

    rec.key = pick_key;
    rec.smiles = chem::WriteSmiles(*pick);
    if (!state.Evaluate(*pick, pick_key, objectives::Provenance::kBo)) {
      result.log.push_back(fmt::format("round {}: budget exhausted", round));
      break;
    }
    rec.score = state.scores().back();
    rec.y_best = state.y_best();
    rec.gp_fits = state.gp_fits() - fits_before;
    result.rounds.push_back(std::move(rec));
  }

  Rng fill_rng(DeriveSeed(cfg.rng_seed, {kFillStream}));
  result.fill = FinalFill(state, cfg, fill_rng);
  result.history = state.oracle().history();
  result.y_best = state.y_best();
  return result;
}

}  // namespace molbo::bo
