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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "molbo/chem/molecule.hpp"

namespace molbo::chem {

/// Canonical atom ranks 0..n-1 from iterative neighbourhood refinement
/// (Morgan-style), with ties between symmetry classes broken one atom at a
/// time and refinement repeated.
std::vector<int> CanonicalRanks(const Molecule& mol);

/// Order-independent identifier: a SMILES-like serialization of the
/// aromatic form written in canonical rank order. Every atom is bracketed
/// with its hydrogen count, so equal keys imply identical graphs.
std::string CanonicalKey(const Molecule& mol);

/// Element symbol -> count, hydrogens included under "H".
using Formula = std::map<std::string, int, std::less<>>;

Formula MolecularFormula(const Molecule& mol);

/// Hill-order text (C, H, then alphabetical), e.g. "C17H14F3N3O2S".
std::string FormatFormula(const Formula& formula);

/// Inverse of FormatFormula. Throws InputError on malformed text.
Formula ParseFormula(std::string_view text);

namespace detail {

enum class SmilesFlavor { kKekule, kKey };

/// Canonical ranks; with `kekule` the refinement distinguishes Kekule bond
/// orders instead of aromatic bonds.
std::vector<int> RanksFor(const Molecule& mol, bool kekule);

std::string WriteDepthFirst(const Molecule& mol, const std::vector<int>& ranks,
                            SmilesFlavor flavor);

}  // namespace detail

}  // namespace molbo::chem
