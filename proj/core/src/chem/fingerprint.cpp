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

#include "molbo/chem/fingerprint.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "molbo/error.hpp"
#include "molbo/rng.hpp"

namespace molbo::chem {
namespace {

constexpr std::uint64_t kAtomSeed = 0x6d6f6c626f2d6670ULL;  // "molbo-fp"

std::uint64_t InitialIdentifier(const Molecule& mol, int a) {
  const Atom& atom = mol.atom(a);
  std::uint64_t h = SplitMix64(kAtomSeed);
  h = HashCombine(h, static_cast<std::uint64_t>(atom.atomic_number));
  h = HashCombine(h, static_cast<std::uint64_t>(mol.HeavyDegree(a)));
  h = HashCombine(h, static_cast<std::uint64_t>(atom.h_count));
  h = HashCombine(h, static_cast<std::uint64_t>(atom.charge + 16));
  h = HashCombine(h, atom.in_ring ? 1U : 0U);
  h = HashCombine(h, atom.aromatic ? 1U : 0U);
  return h;
}

}  // namespace

std::string_view FpModeName(FpMode mode) {
  return mode == FpMode::kBinary ? "binary" : "count";
}

FpMode ParseFpMode(std::string_view text) {
  if (text == "binary") return FpMode::kBinary;
  if (text == "count") return FpMode::kCount;
  throw InputError(fmt::format("unknown fingerprint mode '{}'", text));
}

Fingerprint::Fingerprint(std::vector<Entry> entries, FpMode mode, int radius)
    : mode_(mode), radius_(radius) {
  std::sort(entries.begin(), entries.end());
  for (const auto& [id, count] : entries) {
    if (count == 0) continue;
    if (!entries_.empty() && entries_.back().first == id) {
      entries_.back().second += count;
    } else {
      entries_.emplace_back(id, count);
    }
  }
  if (mode_ == FpMode::kBinary) {
    for (auto& e : entries_) e.second = 1;
  }
}

std::uint64_t Fingerprint::TotalCount() const {
  std::uint64_t total = 0;
  for (const auto& e : entries_) total += e.second;
  return total;
}

std::uint32_t Fingerprint::Count(std::uint64_t id) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{id, 0});
  return it != entries_.end() && it->first == id ? it->second : 0;
}

std::vector<std::vector<std::uint64_t>> MorganAtomIdentifiers(
    const Molecule& mol, int radius) {
  if (radius < 0 || radius > kMaxFingerprintRadius) {
    throw InputError(fmt::format("fingerprint radius {} outside [0, {}]", radius,
                                 kMaxFingerprintRadius));
  }
  const int n = mol.NumAtoms();
  std::vector<std::vector<std::uint64_t>> rounds;
  rounds.reserve(static_cast<std::size_t>(radius) + 1);
  std::vector<std::uint64_t> current(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) current[a] = InitialIdentifier(mol, a);
  rounds.push_back(current);

  std::vector<std::pair<int, std::uint64_t>> env;
  for (int r = 1; r <= radius; ++r) {
    const auto& prev = rounds.back();
    for (int a = 0; a < n; ++a) {
      env.clear();
      for (const auto& nb : mol.Neighbors(a)) {
        env.emplace_back(mol.bond(nb.bond).Code(), prev[nb.atom]);
      }
      std::sort(env.begin(), env.end());
      std::uint64_t h = HashCombine(SplitMix64(kAtomSeed),
                                    static_cast<std::uint64_t>(r));
      h = HashCombine(h, prev[a]);
      for (const auto& [code, id] : env) {
        h = HashCombine(h, static_cast<std::uint64_t>(code));
        h = HashCombine(h, id);
      }
      current[a] = h;
    }
    rounds.push_back(current);
  }
  return rounds;
}

Fingerprint MorganFingerprint(const Molecule& mol, int radius, FpMode mode) {
  const auto rounds = MorganAtomIdentifiers(mol, radius);
  std::vector<Fingerprint::Entry> entries;
  entries.reserve(rounds.size() * static_cast<std::size_t>(mol.NumAtoms()));
  for (const auto& ids : rounds) {
    for (std::uint64_t id : ids) entries.emplace_back(id, 1);
  }
  return Fingerprint(std::move(entries), mode, radius);
}

double Tanimoto(const Fingerprint& a, const Fingerprint& b) {
  if (a.mode() != b.mode()) {
    throw InputError("Tanimoto of fingerprints with different modes");
  }
  if (a.radius() != b.radius()) {
    throw InputError(fmt::format("Tanimoto of fingerprints with radius {} and {}",
                                 a.radius(), b.radius()));
  }
  if (a.empty() && b.empty()) return 1.0;
  // Counts are 1 in binary mode, so the minmax sums reduce to set sizes.
  std::uint64_t min_sum = 0;
  std::uint64_t max_sum = 0;
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  const auto ea = a.entries().end();
  const auto eb = b.entries().end();
  while (ia != ea && ib != eb) {
    if (ia->first < ib->first) {
      max_sum += ia->second;
      ++ia;
    } else if (ib->first < ia->first) {
      max_sum += ib->second;
      ++ib;
    } else {
      min_sum += std::min(ia->second, ib->second);
      max_sum += std::max(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  for (; ia != ea; ++ia) max_sum += ia->second;
  for (; ib != eb; ++ib) max_sum += ib->second;
  return static_cast<double>(min_sum) / static_cast<double>(max_sum);
}

Fingerprint Fold(const Fingerprint& fp, std::uint32_t bits) {
  if (bits == 0) throw InputError("fold width must be positive");
  std::vector<Fingerprint::Entry> entries;
  entries.reserve(fp.size());
  for (const auto& [id, count] : fp.entries()) entries.emplace_back(id % bits, count);
  return Fingerprint(std::move(entries), fp.mode(), fp.radius());
}

Fingerprint WithMode(const Fingerprint& fp, FpMode mode) {
  return Fingerprint({fp.entries().begin(), fp.entries().end()}, mode, fp.radius());
}

}  // namespace molbo::chem
