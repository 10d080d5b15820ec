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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace molbo::chem {

/// Editable heavy-atom graph in Kekule form. This is what the SMILES parser
/// and the GA operators produce; `Molecule::FromGraph` validates it and
/// derives hydrogens, ring membership and aromaticity.
struct MolGraph {
  struct AtomSpec {
    int atomic_number = 6;
    int charge = 0;
    /// Set for bracket atoms; otherwise hydrogens are implicit.
    std::optional<int> explicit_h;
  };
  struct BondSpec {
    int begin = 0;
    int end = 0;
    int order = 1;  // 1, 2 or 3
  };

  std::vector<AtomSpec> atoms;
  std::vector<BondSpec> bonds;

  int AddAtom(int atomic_number, int charge = 0,
              std::optional<int> explicit_h = std::nullopt);
  void AddBond(int begin, int end, int order = 1);

  /// Index of the bond joining a and b, or -1.
  int FindBond(int a, int b) const;

  /// Removes an atom and its bonds, renumbering the remaining atoms.
  void RemoveAtom(int index);
};

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

struct Atom {
  int atomic_number = 6;
  int charge = 0;
  /// Total hydrogens (implicit or bracket-specified).
  int h_count = 0;
  /// Hydrogen count came from a bracket atom rather than the valence model.
  bool explicit_h = false;
  bool aromatic = false;
  bool in_ring = false;

  std::string_view Symbol() const;
};

struct Bond {
  int begin = 0;
  int end = 0;
  /// Order in the stored Kekule structure (1..3).
  int kekule_order = 1;
  bool aromatic = false;
  bool in_ring = false;

  BondOrder order() const {
    return aromatic ? BondOrder::kAromatic
                    : static_cast<BondOrder>(kekule_order);
  }
  /// Small integer code used by hashing and canonical ordering.
  int Code() const { return static_cast<int>(order()); }
  int Other(int atom) const { return atom == begin ? end : begin; }
};

/// Validated, immutable molecular graph.
///
/// Invariants: connected, no self or duplicate bonds, every atom's bond
/// order sum plus hydrogen count is an allowed valence for its charge state,
/// ring flags match the cycle space, and 5/6-membered rings with six pi
/// electrons are flagged aromatic.
class Molecule {
 public:
  struct Neighbor {
    int atom;
    int bond;
  };

  /// Throws InvalidMolecule when the graph breaks an invariant.
  static Molecule FromGraph(const MolGraph& graph);
  static std::optional<Molecule> TryFromGraph(const MolGraph& graph);

  MolGraph ToGraph() const;

  int NumAtoms() const { return static_cast<int>(atoms_.size()); }
  int NumBonds() const { return static_cast<int>(bonds_.size()); }
  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Bond> bonds() const { return bonds_; }
  const Atom& atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  const Bond& bond(int i) const { return bonds_[static_cast<std::size_t>(i)]; }
  std::span<const Neighbor> Neighbors(int atom) const;

  int HeavyDegree(int atom) const {
    return static_cast<int>(Neighbors(atom).size());
  }
  /// Sum of Kekule bond orders at an atom.
  int BondOrderSum(int atom) const;

  /// Same molecule with atom i moved to position new_index[i].
  Molecule Permuted(std::span<const int> new_index) const;

 private:
  Molecule() = default;
  void BuildAdjacency();

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<Neighbor> adjacency_;
  std::vector<int> adjacency_offset_;
};

/// Number of non-hydrogen atoms.
int HeavyAtomCount(const Molecule& mol);

}  // namespace molbo::chem
