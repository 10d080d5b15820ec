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

#include "molbo/ga.hpp"

#include <algorithm>
#include <array>
#include <thread>

#include <fmt/format.h>

#include "molbo/chem/canon.hpp"
#include "molbo/error.hpp"

namespace molbo::ga {
namespace {

constexpr int kMaxAttempts = 20;
constexpr std::array<int, 5> kMutationElements{6, 7, 8, 16, 9};  // C N O S F

bool WithinCap(const chem::Molecule& mol, int cap) {
  return chem::HeavyAtomCount(mol) <= cap;
}

// Atoms reachable from `start` without crossing `cut_bond`.
std::vector<int> FragmentAtoms(const chem::Molecule& mol, int start, int cut_bond) {
  std::vector<bool> seen(static_cast<std::size_t>(mol.NumAtoms()), false);
  std::vector<int> stack{start};
  std::vector<int> out;
  seen[start] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (const auto& nb : mol.Neighbors(v)) {
      if (nb.bond == cut_bond || seen[nb.atom]) continue;
      seen[nb.atom] = true;
      stack.push_back(nb.atom);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Copies the atoms of a fragment into `g`, returning the new index of
// `attach`.
int CopyFragment(const chem::Molecule& mol, const std::vector<int>& atoms, int attach,
                 chem::MolGraph& g) {
  const chem::MolGraph src = mol.ToGraph();
  std::vector<int> remap(static_cast<std::size_t>(mol.NumAtoms()), -1);
  for (int a : atoms) {
    remap[a] = static_cast<int>(g.atoms.size());
    g.atoms.push_back(src.atoms[a]);
  }
  for (const auto& b : src.bonds) {
    if (remap[b.begin] >= 0 && remap[b.end] >= 0) {
      g.AddBond(remap[b.begin], remap[b.end], b.order);
    }
  }
  return remap[attach];
}

struct Fragment {
  std::vector<int> atoms;
  int attach;
};

Fragment RandomFragment(const chem::Molecule& mol, const std::vector<int>& cuttable,
                        Rng& rng) {
  const int bond = cuttable[rng.UniformIndex(cuttable.size())];
  const auto& b = mol.bond(bond);
  const int attach = rng.UniformIndex(2) == 0 ? b.begin : b.end;
  return {FragmentAtoms(mol, attach, bond), attach};
}

std::optional<chem::Molecule> ApplyMutation(const chem::Molecule& mol, MutationOp op,
                                            Rng& rng) {
  chem::MolGraph g = mol.ToGraph();
  const int n = mol.NumAtoms();
  auto release = [&g](int atom) { g.atoms[atom].explicit_h.reset(); };
  switch (op) {
    case MutationOp::kSubstituteElement: {
      const int atom = static_cast<int>(rng.UniformIndex(static_cast<std::uint64_t>(n)));
      std::vector<int> choices;
      for (int z : kMutationElements) {
        if (z != g.atoms[atom].atomic_number) choices.push_back(z);
      }
      g.atoms[atom].atomic_number = choices[rng.UniformIndex(choices.size())];
      g.atoms[atom].charge = 0;
      release(atom);
      break;
    }
    case MutationOp::kIncrementBond:
    case MutationOp::kDecrementBond: {
      const bool up = op == MutationOp::kIncrementBond;
      std::vector<int> eligible;
      for (std::size_t i = 0; i < g.bonds.size(); ++i) {
        const int order = g.bonds[i].order;
        if (up ? order < 3 : order > 1) eligible.push_back(static_cast<int>(i));
      }
      if (eligible.empty()) return std::nullopt;
      auto& b = g.bonds[eligible[rng.UniformIndex(eligible.size())]];
      b.order += up ? 1 : -1;
      release(b.begin);
      release(b.end);
      break;
    }
    case MutationOp::kAppendAtom: {
      const int atom = static_cast<int>(rng.UniformIndex(static_cast<std::uint64_t>(n)));
      const int z = kMutationElements[rng.UniformIndex(kMutationElements.size())];
      const int added = g.AddAtom(z);
      g.AddBond(atom, added, 1);
      release(atom);
      break;
    }
    case MutationOp::kDeleteAtom: {
      if (n <= 1) return std::nullopt;
      std::vector<int> terminal;
      for (int a = 0; a < n; ++a) {
        if (mol.HeavyDegree(a) == 1) terminal.push_back(a);
      }
      if (terminal.empty()) return std::nullopt;
      const int atom = terminal[rng.UniformIndex(terminal.size())];
      release(mol.Neighbors(atom).front().atom);
      g.RemoveAtom(atom);
      break;
    }
  }
  return chem::Molecule::TryFromGraph(g);
}

}  // namespace

GAConfig GAConfig::Desk() { return GAConfig{}; }

GAConfig GAConfig::FullScale() {
  GAConfig c;
  c.population_size = 10'000;
  c.offspring_size = 200;
  c.generations = 5;
  return c;
}

void GAConfig::Validate() const {
  if (population_size < 1 || offspring_size < 1 || max_heavy_atoms < 1) {
    throw InputError("GA population, offspring and heavy-atom cap must be >= 1");
  }
  if (generations < 0) throw InputError("GA generations must be >= 0");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
    throw InputError(fmt::format("mutation rate {} outside [0, 1]", mutation_rate));
  }
  if (num_threads < 1) throw InputError("GA num_threads must be >= 1");
}

bool PoolOrder(const PoolEntry& a, const PoolEntry& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.key < b.key;
}

bool ScoredPool::Insert(PoolEntry entry) {
  if (!keys_.insert(entry.key).second) return false;
  const auto pos = std::upper_bound(entries_.begin(), entries_.end(), entry, PoolOrder);
  entries_.insert(pos, std::move(entry));
  return true;
}

bool ScoredPool::Insert(chem::Molecule mol, double score) {
  std::string key = chem::CanonicalKey(mol);
  return Insert(PoolEntry{std::move(key), std::move(mol), score});
}

ScoredPool ScoredPool::Top(std::size_t n) const {
  ScoredPool out;
  const std::size_t m = std::min(n, entries_.size());
  out.entries_.assign(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(m));
  for (const auto& e : out.entries_) out.keys_.insert(e.key);
  return out;
}

std::vector<int> CuttableBonds(const chem::Molecule& mol) {
  std::vector<int> out;
  for (int i = 0; i < mol.NumBonds(); ++i) {
    const auto& b = mol.bond(i);
    if (!b.in_ring && !b.aromatic && b.kekule_order == 1) out.push_back(i);
  }
  return out;
}

std::optional<chem::Molecule> Crossover(const chem::Molecule& a, const chem::Molecule& b,
                                        Rng& rng, int max_heavy_atoms) {
  const auto cut_a = CuttableBonds(a);
  const auto cut_b = CuttableBonds(b);
  if (cut_a.empty() || cut_b.empty()) return std::nullopt;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Fragment fa = RandomFragment(a, cut_a, rng);
    const Fragment fb = RandomFragment(b, cut_b, rng);
    if (static_cast<int>(fa.atoms.size() + fb.atoms.size()) > max_heavy_atoms) continue;
    chem::MolGraph g;
    const int ia = CopyFragment(a, fa.atoms, fa.attach, g);
    const int ib = CopyFragment(b, fb.atoms, fb.attach, g);
    g.AddBond(ia, ib, 1);
    if (auto child = chem::Molecule::TryFromGraph(g)) return child;
  }
  return std::nullopt;
}

std::optional<chem::Molecule> Mutate(const chem::Molecule& mol, Rng& rng,
                                     int max_heavy_atoms,
                                     std::optional<MutationOp> forced) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const MutationOp op =
        forced ? *forced : static_cast<MutationOp>(rng.UniformIndex(5));
    auto out = ApplyMutation(mol, op, rng);
    if (out && WithinCap(*out, max_heavy_atoms)) return out;
  }
  return std::nullopt;
}

ScoredPool GaMaximize(const ScoreFn& score_fn, const ScoredPool& seed_pool,
                      const GAConfig& cfg, Rng& rng, GAStats* stats) {
  cfg.Validate();
  if (seed_pool.empty()) throw InputError("GA seed pool is empty");
  GAStats local;
  GAStats& st = stats ? *stats : local;
  st = GAStats{};

  ScoredPool all = seed_pool;
  if (cfg.generations == 0) return all;

  const std::uint64_t base = DeriveSeed(cfg.rng_seed, {rng.NextU64()});
  std::vector<PoolEntry> population = seed_pool.Top(
      static_cast<std::size_t>(cfg.population_size)).entries();

  for (int gen = 0; gen < cfg.generations; ++gen) {
    std::vector<double> cumulative(population.size());
    double total = 0.0;
    for (std::size_t r = 0; r < population.size(); ++r) {
      total += 1.0 / static_cast<double>(r + 1);
      cumulative[r] = total;
    }
    auto select = [&](Rng& r) -> const PoolEntry& {
      const double u = r.Uniform() * total;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      if (it == cumulative.end()) --it;
      return population[static_cast<std::size_t>(it - cumulative.begin())];
    };

    std::vector<PoolEntry> fresh;
    std::unordered_set<std::string> batch_keys;
    for (int i = 0; i < cfg.offspring_size; ++i) {
      Rng r(DeriveSeed(base, {static_cast<std::uint64_t>(gen),
                              static_cast<std::uint64_t>(i)}));
      const PoolEntry& pa = select(r);
      const PoolEntry& pb = select(r);
      auto child = Crossover(pa.mol, pb.mol, r, cfg.max_heavy_atoms);
      if (!child) {
        child = Mutate(pa.mol, r, cfg.max_heavy_atoms);
      } else if (r.Uniform() < cfg.mutation_rate) {
        if (auto m = Mutate(*child, r, cfg.max_heavy_atoms)) child = std::move(m);
      }
      if (!child) continue;
      std::string key = chem::CanonicalKey(*child);
      if (all.Contains(key) || !batch_keys.insert(key).second) continue;
      fresh.push_back(PoolEntry{std::move(key), std::move(*child), 0.0});
    }

    if (cfg.num_threads > 1 && fresh.size() > 1) {
      const std::size_t workers =
          std::min<std::size_t>(static_cast<std::size_t>(cfg.num_threads), fresh.size());
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t j = w; j < fresh.size(); j += workers) {
            fresh[j].score = score_fn(fresh[j].mol);
          }
        });
      }
    } else {
      for (auto& e : fresh) e.score = score_fn(e.mol);
    }
    st.evaluations += static_cast<int>(fresh.size());
    if (fresh.empty()) ++st.empty_generations;

    for (const auto& e : fresh) {
      all.Insert(e);
      population.push_back(e);
    }
    std::sort(population.begin(), population.end(), PoolOrder);
    if (population.size() > static_cast<std::size_t>(cfg.population_size)) {
      population.erase(population.begin() + cfg.population_size, population.end());
    }
    st.best_per_generation.push_back(population.front().score);
  }
  return all;
}

}  // namespace molbo::ga
