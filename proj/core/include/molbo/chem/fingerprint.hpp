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
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "molbo/chem/molecule.hpp"

namespace molbo::chem {

enum class FpMode { kBinary, kCount };

std::string_view FpModeName(FpMode mode);
/// "binary" or "count"; throws InputError otherwise.
FpMode ParseFpMode(std::string_view text);

/// Sparse multiset of circular-environment identifiers.
class Fingerprint {
 public:
  using Entry = std::pair<std::uint64_t, std::uint32_t>;

  Fingerprint() = default;
  /// Entries are merged by identifier and sorted; in binary mode every
  /// count collapses to 1. Zero counts are dropped.
  Fingerprint(std::vector<Entry> entries, FpMode mode, int radius);

  /// Sorted by identifier, counts positive.
  std::span<const Entry> entries() const { return entries_; }
  FpMode mode() const { return mode_; }
  int radius() const { return radius_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::uint64_t TotalCount() const;
  std::uint32_t Count(std::uint64_t id) const;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;

 private:
  std::vector<Entry> entries_;
  FpMode mode_ = FpMode::kCount;
  int radius_ = 0;
};

constexpr int kMaxFingerprintRadius = 8;

/// Morgan-style circular fingerprint with unfolded 64-bit identifiers.
///
/// Round 0 hashes (atomic number, heavy degree, total H, formal charge,
/// ring flag, aromatic flag). Round r hashes (r, previous identifier,
/// sorted (bond code, neighbour identifier) pairs). Every atom contributes
/// one identifier per round 0..radius; there is no deduplication of
/// environments covering the same bonds.
Fingerprint MorganFingerprint(const Molecule& mol, int radius, FpMode mode);

/// Per-atom identifiers for each round: result[r][atom].
std::vector<std::vector<std::uint64_t>> MorganAtomIdentifiers(
    const Molecule& mol, int radius);

/// Jaccard index (binary) or minmax ratio sum(min)/sum(max) (count).
/// Two empty fingerprints are identical (1.0). Throws InputError on
/// mode/radius mismatch.
double Tanimoto(const Fingerprint& a, const Fingerprint& b);

/// Folds identifiers into `bits` buckets (id mod bits), summing counts.
/// Diagnostic only: folding introduces collisions.
Fingerprint Fold(const Fingerprint& fp, std::uint32_t bits);

/// Same identifiers re-expressed in the other mode.
Fingerprint WithMode(const Fingerprint& fp, FpMode mode);

}  // namespace molbo::chem
