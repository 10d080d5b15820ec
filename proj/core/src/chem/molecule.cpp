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

#include "molbo/chem/molecule.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "molbo/chem/element.hpp"
#include "molbo/error.hpp"

namespace molbo::chem {

int MolGraph::AddAtom(int atomic_number, int charge,
                      std::optional<int> explicit_h) {
  atoms.push_back({atomic_number, charge, explicit_h});
  return static_cast<int>(atoms.size()) - 1;
}

void MolGraph::AddBond(int begin, int end, int order) {
  bonds.push_back({begin, end, order});
}

int MolGraph::FindBond(int a, int b) const {
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    const auto& bd = bonds[i];
    if ((bd.begin == a && bd.end == b) || (bd.begin == b && bd.end == a)) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

void MolGraph::RemoveAtom(int index) {
  atoms.erase(atoms.begin() + index);
  std::erase_if(bonds, [index](const BondSpec& b) {
    return b.begin == index || b.end == index;
  });
  for (auto& b : bonds) {
    if (b.begin > index) --b.begin;
    if (b.end > index) --b.end;
  }
}

std::string_view Atom::Symbol() const { return ElementSymbol(atomic_number); }

namespace {

// Marks ring bonds: a bond is in a ring iff it is not a bridge.
std::vector<bool> FindRingBonds(int n, const std::vector<Bond>& bonds,
                                const std::vector<std::vector<int>>& incident) {
  std::vector<bool> ring(bonds.size(), true);
  std::vector<int> disc(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  int timer = 0;
  std::function<void(int, int)> dfs = [&](int v, int parent_bond) {
    disc[v] = low[v] = timer++;
    for (int bi : incident[v]) {
      if (bi == parent_bond) continue;
      const int w = bonds[bi].Other(v);
      if (disc[w] < 0) {
        dfs(w, bi);
        low[v] = std::min(low[v], low[w]);
        if (low[w] > disc[v]) ring[bi] = false;
      } else {
        low[v] = std::min(low[v], disc[w]);
      }
    }
  };
  for (int v = 0; v < n; ++v) {
    if (disc[v] < 0) dfs(v, -1);
  }
  return ring;
}

// Pi electrons an atom donates to a ring; 0 means it cannot be aromatic.
int PiContribution(const Atom& atom, const std::vector<Bond>& bonds,
                   const std::vector<int>& incident) {
  bool ring_double = false;
  bool any_multiple = false;
  for (int bi : incident) {
    const Bond& b = bonds[bi];
    if (b.kekule_order >= 2) {
      any_multiple = true;
      if (b.in_ring && b.kekule_order == 2) {
        ring_double = true;
      } else {
        return 0;  // exocyclic multiple bond or ring triple bond
      }
    }
  }
  if (ring_double) return 1;
  if (any_multiple) return 0;
  const int connections = static_cast<int>(incident.size()) + atom.h_count;
  switch (atom.atomic_number) {
    case 7:
      return atom.charge == 0 && connections == 3 ? 2 : 0;
    case 8:
    case 16:
      return atom.charge == 0 && connections == 2 ? 2 : 0;
    case 6:
      return atom.charge == -1 && connections == 3 ? 2 : 0;
    default:
      return 0;
  }
}

void PerceiveAromaticity(std::vector<Atom>& atoms, std::vector<Bond>& bonds,
                         const std::vector<std::vector<int>>& incident) {
  const int n = static_cast<int>(atoms.size());
  std::vector<int> contribution(atoms.size());
  for (int i = 0; i < n; ++i) {
    contribution[i] = atoms[i].in_ring
                          ? PiContribution(atoms[i], bonds, incident[i])
                          : 0;
  }
  std::vector<int> path;
  std::vector<int> path_bonds;
  std::vector<bool> on_path(atoms.size(), false);
  std::vector<bool> aromatic_bond(bonds.size(), false);

  auto accept_cycle = [&](int closing_bond) {
    int electrons = 0;
    for (int a : path) electrons += contribution[a];
    if (electrons != 6) return;
    for (int a : path) atoms[a].aromatic = true;
    for (int b : path_bonds) aromatic_bond[b] = true;
    aromatic_bond[closing_bond] = true;
  };

  std::function<void(int, int)> extend = [&](int start, int v) {
    for (int bi : incident[v]) {
      const Bond& b = bonds[bi];
      if (!b.in_ring) continue;
      const int w = b.Other(v);
      if (w == start) {
        const auto len = path.size();
        if (len >= 5 && len <= 6 && path[1] < path.back()) accept_cycle(bi);
        continue;
      }
      if (w < start || on_path[w] || contribution[w] == 0) continue;
      if (path.size() >= 6) continue;
      on_path[w] = true;
      path.push_back(w);
      path_bonds.push_back(bi);
      extend(start, w);
      path.pop_back();
      path_bonds.pop_back();
      on_path[w] = false;
    }
  };

  for (int s = 0; s < n; ++s) {
    if (contribution[s] == 0) continue;
    path.assign(1, s);
    path_bonds.clear();
    on_path[s] = true;
    extend(s, s);
    on_path[s] = false;
  }
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    bonds[i].aromatic = aromatic_bond[i];
  }
}

}  // namespace

Molecule Molecule::FromGraph(const MolGraph& graph) {
  const int n = static_cast<int>(graph.atoms.size());
  if (n == 0) throw InvalidMolecule("molecule has no atoms");

  Molecule mol;
  mol.atoms_.reserve(graph.atoms.size());
  for (int i = 0; i < n; ++i) {
    const auto& spec = graph.atoms[i];
    if (!FindElement(spec.atomic_number)) {
      throw InvalidMolecule(
          fmt::format("atom {}: unsupported element {}", i, spec.atomic_number),
          i);
    }
    if (spec.explicit_h && *spec.explicit_h < 0) {
      throw InvalidMolecule(fmt::format("atom {}: negative H count", i), i);
    }
    Atom a;
    a.atomic_number = spec.atomic_number;
    a.charge = spec.charge;
    a.explicit_h = spec.explicit_h.has_value();
    a.h_count = spec.explicit_h.value_or(0);
    mol.atoms_.push_back(a);
  }

  std::set<std::pair<int, int>> seen;
  std::vector<std::vector<int>> incident(graph.atoms.size());
  for (std::size_t i = 0; i < graph.bonds.size(); ++i) {
    const auto& spec = graph.bonds[i];
    if (spec.begin < 0 || spec.end < 0 || spec.begin >= n || spec.end >= n) {
      throw InvalidMolecule(fmt::format("bond {}: atom index out of range", i));
    }
    if (spec.begin == spec.end) {
      throw InvalidMolecule(fmt::format("bond {}: self-bond", i), spec.begin);
    }
    if (spec.order < 1 || spec.order > 3) {
      throw InvalidMolecule(fmt::format("bond {}: order {}", i, spec.order));
    }
    if (!seen.emplace(std::minmax(spec.begin, spec.end)).second) {
      throw InvalidMolecule(fmt::format("bond {}: duplicate bond {}-{}", i,
                                        spec.begin, spec.end),
                            spec.end);
    }
    Bond b;
    b.begin = spec.begin;
    b.end = spec.end;
    b.kekule_order = spec.order;
    mol.bonds_.push_back(b);
    incident[spec.begin].push_back(static_cast<int>(i));
    incident[spec.end].push_back(static_cast<int>(i));
  }

  // Connectivity.
  {
    std::vector<bool> visited(graph.atoms.size(), false);
    std::vector<int> stack{0};
    visited[0] = true;
    int count = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int bi : incident[v]) {
        const int w = mol.bonds_[bi].Other(v);
        if (!visited[w]) {
          visited[w] = true;
          ++count;
          stack.push_back(w);
        }
      }
    }
    if (count != n) throw InvalidMolecule("molecule is disconnected");
  }

  // Hydrogens and valence.
  for (int i = 0; i < n; ++i) {
    Atom& a = mol.atoms_[i];
    int sum = 0;
    for (int bi : incident[i]) sum += mol.bonds_[bi].kekule_order;
    if (a.explicit_h) {
      const auto allowed = AllowedValences(a.atomic_number, a.charge);
      if (std::find(allowed.begin(), allowed.end(), sum + a.h_count) ==
          allowed.end()) {
        throw InvalidMolecule(fmt::format(
            "atom {} ({}{:+}): valence {} not allowed", i, a.Symbol(),
            a.charge, sum + a.h_count),
            i);
      }
    } else {
      const auto v = SmallestValenceAtLeast(a.atomic_number, a.charge, sum);
      if (!v) {
        throw InvalidMolecule(fmt::format("atom {} ({}{:+}): bond order sum {} "
                                          "exceeds every allowed valence",
                                          i, a.Symbol(), a.charge, sum),
                              i);
      }
      a.h_count = *v - sum;
    }
  }

  const auto ring = FindRingBonds(n, mol.bonds_, incident);
  for (std::size_t i = 0; i < mol.bonds_.size(); ++i) {
    Bond& b = mol.bonds_[i];
    b.in_ring = ring[i];
    if (b.in_ring) {
      mol.atoms_[b.begin].in_ring = true;
      mol.atoms_[b.end].in_ring = true;
    }
  }

  PerceiveAromaticity(mol.atoms_, mol.bonds_, incident);
  mol.BuildAdjacency();
  return mol;
}

std::optional<Molecule> Molecule::TryFromGraph(const MolGraph& graph) {
  try {
    return FromGraph(graph);
  } catch (const InvalidMolecule&) {
    return std::nullopt;
  }
}

MolGraph Molecule::ToGraph() const {
  MolGraph g;
  g.atoms.reserve(atoms_.size());
  for (const Atom& a : atoms_) {
    g.AddAtom(a.atomic_number, a.charge,
              a.explicit_h ? std::optional<int>(a.h_count) : std::nullopt);
  }
  g.bonds.reserve(bonds_.size());
  for (const Bond& b : bonds_) g.AddBond(b.begin, b.end, b.kekule_order);
  return g;
}

void Molecule::BuildAdjacency() {
  const std::size_t n = atoms_.size();
  std::vector<int> degree(n, 0);
  for (const Bond& b : bonds_) {
    ++degree[b.begin];
    ++degree[b.end];
  }
  adjacency_offset_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    adjacency_offset_[i + 1] = adjacency_offset_[i] + degree[i];
  }
  adjacency_.assign(static_cast<std::size_t>(adjacency_offset_[n]), {0, 0});
  std::vector<int> fill(adjacency_offset_.begin(), adjacency_offset_.end() - 1);
  for (std::size_t i = 0; i < bonds_.size(); ++i) {
    const Bond& b = bonds_[i];
    adjacency_[fill[b.begin]++] = {b.end, static_cast<int>(i)};
    adjacency_[fill[b.end]++] = {b.begin, static_cast<int>(i)};
  }
}

std::span<const Molecule::Neighbor> Molecule::Neighbors(int atom) const {
  const auto begin = static_cast<std::size_t>(adjacency_offset_[atom]);
  const auto end = static_cast<std::size_t>(adjacency_offset_[atom + 1]);
  return std::span<const Neighbor>(adjacency_).subspan(begin, end - begin);
}

int Molecule::BondOrderSum(int atom) const {
  int sum = 0;
  for (const Neighbor& nb : Neighbors(atom)) sum += bonds_[nb.bond].kekule_order;
  return sum;
}

Molecule Molecule::Permuted(std::span<const int> new_index) const {
  if (new_index.size() != atoms_.size()) {
    throw InputError("permutation size does not match atom count");
  }
  MolGraph src = ToGraph();
  MolGraph dst;
  dst.atoms.resize(src.atoms.size());
  for (std::size_t i = 0; i < src.atoms.size(); ++i) {
    dst.atoms[static_cast<std::size_t>(new_index[i])] = src.atoms[i];
  }
  for (const auto& b : src.bonds) {
    dst.AddBond(new_index[b.begin], new_index[b.end], b.order);
  }
  return FromGraph(dst);
}

int HeavyAtomCount(const Molecule& mol) { return mol.NumAtoms(); }

}  // namespace molbo::chem
