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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "molbo/chem/molecule.hpp"

namespace molbo::chem {

/// Parses a single-component SMILES string.
///
/// Supported: organic-subset atoms (B C N O P S F Cl Br I), aromatic
/// lowercase atoms (b c n o p s), bracket atoms with H count and charge,
/// branches, ring closures (digits and %nn) and the bond symbols - = # :.
/// Lowercase aromatic input is kekulized; hydrogens come from the valence
/// table. Stereo marks, isotopes, wildcards, atom classes and '.' are
/// rejected. Throws ParseError carrying the offending offset.
Molecule ParseSmiles(std::string_view text);

/// Canonical Kekule SMILES; ParseSmiles(WriteSmiles(m)) has the same
/// canonical key as m.
std::string WriteSmiles(const Molecule& mol);

struct SmilesRecord {
  std::string smiles;
  Molecule mol;
  int line = 0;
};

/// One molecule per line; blank lines and lines starting with '#' are
/// skipped, and anything after the first whitespace is treated as a title.
/// Throws ParseError naming the line on malformed input.
std::vector<SmilesRecord> ReadSmiles(std::istream& in);
std::vector<SmilesRecord> ReadSmilesFile(const std::filesystem::path& path);

}  // namespace molbo::chem
