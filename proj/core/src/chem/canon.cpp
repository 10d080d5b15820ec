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

#include "molbo/chem/canon.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

#include "molbo/chem/element.hpp"
#include "molbo/error.hpp"

namespace molbo::chem {
namespace {

// Assigns dense ranks (0, 1, ...) to atoms ordered by key; equal keys share
// a rank. Returns the number of distinct ranks.
template <typename Key>
int DenseRank(const std::vector<Key>& keys, std::vector<int>& ranks) {
  const std::size_t n = keys.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return keys[a] < keys[b]; });
  ranks.assign(n, 0);
  int rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && keys[order[i - 1]] < keys[order[i]]) ++rank;
    ranks[order[i]] = rank;
  }
  return n == 0 ? 0 : rank + 1;
}

int BondCode(const Bond& b, bool kekule) { return kekule ? b.kekule_order : b.Code(); }

int Refine(const Molecule& mol, std::vector<int>& ranks, int classes, bool kekule) {
  const int n = mol.NumAtoms();
  using Key = std::pair<int, std::vector<std::pair<int, int>>>;
  std::vector<Key> keys(static_cast<std::size_t>(n));
  while (true) {
    for (int a = 0; a < n; ++a) {
      auto& [self, env] = keys[a];
      self = ranks[a];
      env.clear();
      for (const auto& nb : mol.Neighbors(a)) {
        env.emplace_back(BondCode(mol.bond(nb.bond), kekule), ranks[nb.atom]);
      }
      std::sort(env.begin(), env.end());
    }
    const int next = DenseRank(keys, ranks);
    if (next == classes) return classes;
    classes = next;
  }
}

std::string AtomText(const Molecule& mol, int index,
                     detail::SmilesFlavor flavor) {
  const Atom& a = mol.atom(index);
  std::string symbol(a.Symbol());
  auto charge_text = [&] {
    if (a.charge == 0) return std::string();
    const char sign = a.charge > 0 ? '+' : '-';
    const int mag = std::abs(a.charge);
    return mag == 1 ? std::string(1, sign) : fmt::format("{}{}", sign, mag);
  };
  if (flavor == detail::SmilesFlavor::kKey) {
    if (a.aromatic) {
      for (char& c : symbol) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
    }
    return fmt::format("[{}H{}{}]", symbol, a.h_count, charge_text());
  }
  const int sum = mol.BondOrderSum(index);
  const auto implicit = SmallestValenceAtLeast(a.atomic_number, 0, sum);
  const bool plain =
      a.charge == 0 && implicit && *implicit - sum == a.h_count;
  if (plain) return symbol;
  std::string h;
  if (a.h_count == 1) {
    h = "H";
  } else if (a.h_count > 1) {
    h = fmt::format("H{}", a.h_count);
  }
  return fmt::format("[{}{}{}]", symbol, h, charge_text());
}

std::string BondText(const Bond& b, detail::SmilesFlavor flavor) {
  if (flavor == detail::SmilesFlavor::kKey && b.aromatic) return ":";
  switch (b.kekule_order) {
    case 2:
      return "=";
    case 3:
      return "#";
    default:
      return "";
  }
}

std::string RingLabel(int digit) {
  return digit < 10 ? std::string(1, static_cast<char>('0' + digit))
                    : fmt::format("%{}", digit);
}

}  // namespace

std::vector<int> CanonicalRanks(const Molecule& mol) { return detail::RanksFor(mol, false); }

namespace detail {

std::vector<int> RanksFor(const Molecule& mol, bool kekule) {
  const int n = mol.NumAtoms();
  using Invariant = std::tuple<int, int, int, int, bool, bool>;
  std::vector<Invariant> initial;
  initial.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const Atom& at = mol.atom(a);
    initial.emplace_back(at.atomic_number, mol.HeavyDegree(a), at.h_count,
                         at.charge, at.aromatic, at.in_ring);
  }
  std::vector<int> ranks;
  int classes = DenseRank(initial, ranks);
  classes = Refine(mol, ranks, classes, kekule);
  while (classes < n) {
    // Break the lowest tied class by promoting its first member.
    std::vector<int> count(static_cast<std::size_t>(classes), 0);
    for (int r : ranks) ++count[r];
    int tied = 0;
    while (count[tied] < 2) ++tied;
    const int chosen = static_cast<int>(
        std::find(ranks.begin(), ranks.end(), tied) - ranks.begin());
    std::vector<std::pair<int, int>> keys(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) keys[a] = {ranks[a], a == chosen ? 0 : 1};
    classes = DenseRank(keys, ranks);
    classes = Refine(mol, ranks, classes, kekule);
  }
  return ranks;
}

std::string WriteDepthFirst(const Molecule& mol, const std::vector<int>& ranks,
                            SmilesFlavor flavor) {
  const int n = mol.NumAtoms();
  struct Edge {
    int atom;
    int bond;
  };
  std::vector<std::vector<Edge>> children(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> ring_open(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> ring_close(static_cast<std::size_t>(n));
  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  std::vector<bool> closure(static_cast<std::size_t>(mol.NumBonds()), false);

  const int start = static_cast<int>(
      std::min_element(ranks.begin(), ranks.end()) - ranks.begin());

  auto sorted_neighbors = [&](int v) {
    std::vector<Molecule::Neighbor> nbs(mol.Neighbors(v).begin(),
                                        mol.Neighbors(v).end());
    std::sort(nbs.begin(), nbs.end(), [&](const auto& x, const auto& y) {
      return ranks[x.atom] < ranks[y.atom];
    });
    return nbs;
  };

  auto discover = [&](auto&& self, int v, int parent_bond) -> void {
    visited[v] = true;
    for (const auto& nb : sorted_neighbors(v)) {
      if (nb.bond == parent_bond) continue;
      if (visited[nb.atom]) {
        if (!closure[nb.bond]) {
          closure[nb.bond] = true;
          ring_open[nb.atom].push_back(nb.bond);
          ring_close[v].push_back(nb.bond);
        }
        continue;
      }
      children[v].push_back({nb.atom, nb.bond});
      self(self, nb.atom, nb.bond);
    }
  };
  discover(discover, start, -1);

  std::string out;
  std::vector<int> digit_of_bond(static_cast<std::size_t>(mol.NumBonds()), 0);
  std::vector<bool> digit_in_use(100, false);

  auto emit = [&](auto&& self, int v) -> void {
    out += AtomText(mol, v, flavor);
    std::vector<int> freed;
    for (int b : ring_close[v]) {
      out += BondText(mol.bond(b), flavor);
      out += RingLabel(digit_of_bond[b]);
      freed.push_back(digit_of_bond[b]);
    }
    for (int b : ring_open[v]) {
      int d = 1;
      while (digit_in_use[d]) ++d;
      if (d > 99) throw InputError("too many open ring closures");
      digit_in_use[d] = true;
      digit_of_bond[b] = d;
      out += BondText(mol.bond(b), flavor);
      out += RingLabel(d);
    }
    for (int d : freed) digit_in_use[d] = false;
    const auto& kids = children[v];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const bool last = i + 1 == kids.size();
      if (!last) out += '(';
      out += BondText(mol.bond(kids[i].bond), flavor);
      self(self, kids[i].atom);
      if (!last) out += ')';
    }
  };
  emit(emit, start);
  return out;
}

}  // namespace detail

std::string CanonicalKey(const Molecule& mol) {
  return detail::WriteDepthFirst(mol, CanonicalRanks(mol),
                                 detail::SmilesFlavor::kKey);
}

Formula MolecularFormula(const Molecule& mol) {
  Formula f;
  int hydrogens = 0;
  for (const Atom& a : mol.atoms()) {
    ++f[std::string(a.Symbol())];
    hydrogens += a.h_count;
  }
  if (hydrogens > 0) f["H"] = hydrogens;
  return f;
}

std::string FormatFormula(const Formula& formula) {
  std::string out;
  auto put = [&](const std::string& sym, int count) {
    if (count <= 0) return;
    out += sym;
    if (count > 1) out += std::to_string(count);
  };
  const bool has_carbon = formula.contains("C");
  if (has_carbon) {
    put("C", formula.at("C"));
    if (auto it = formula.find("H"); it != formula.end()) put("H", it->second);
  }
  for (const auto& [sym, count] : formula) {
    if (has_carbon && (sym == "C" || sym == "H")) continue;
    put(sym, count);
  }
  return out;
}

Formula ParseFormula(std::string_view text) {
  Formula f;
  std::size_t i = 0;
  if (text.empty()) throw InputError("empty formula");
  while (i < text.size()) {
    if (!std::isupper(static_cast<unsigned char>(text[i]))) {
      throw InputError(fmt::format("malformed formula '{}'", text));
    }
    std::string sym(1, text[i++]);
    while (i < text.size() && std::islower(static_cast<unsigned char>(text[i]))) {
      sym += text[i++];
    }
    if (sym != "H" && !FindElement(sym)) {
      throw InputError(fmt::format("unknown element '{}' in formula", sym));
    }
    int count = 0;
    bool digits = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      count = count * 10 + (text[i++] - '0');
      digits = true;
    }
    f[sym] += digits ? count : 1;
  }
  return f;
}

}  // namespace molbo::chem
