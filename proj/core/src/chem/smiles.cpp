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

#include "molbo/chem/smiles.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "molbo/chem/canon.hpp"
#include "molbo/chem/element.hpp"
#include "molbo/error.hpp"

namespace molbo::chem {
namespace {

constexpr int kAromaticBond = 4;

struct ParsedAtom {
  int atomic_number = 0;
  int charge = 0;
  std::optional<int> explicit_h;
  bool aromatic = false;
  std::size_t position = 0;
};

struct ParsedBond {
  int begin;
  int end;
  int order;  // 1..3 or kAromaticBond
};

struct RingOpening {
  int atom;
  int bond_symbol;  // 0 when unspecified
  std::size_t position;
};

bool IsAromaticSymbol(char c) {
  return c == 'b' || c == 'c' || c == 'n' || c == 'o' || c == 'p' || c == 's';
}

int AromaticAtomicNumber(char c) {
  switch (c) {
    case 'b':
      return 5;
    case 'c':
      return 6;
    case 'n':
      return 7;
    case 'o':
      return 8;
    case 'p':
      return 15;
    default:
      return 16;
  }
}

int BondSymbolOrder(char c) {
  switch (c) {
    case '-':
      return 1;
    case '=':
      return 2;
    case '#':
      return 3;
    case ':':
      return kAromaticBond;
    default:
      return 0;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Molecule Run() {
    if (text_.empty()) throw ParseError("empty SMILES", 0);
    ParseChain();
    return Build();
  }

 private:
  [[noreturn]] void Fail(const std::string& message, std::size_t pos) const {
    throw ParseError(message, pos);
  }

  void ParseChain() {
    int prev = -1;
    int pending_bond = 0;
    std::size_t pending_pos = 0;
    std::vector<std::pair<int, std::size_t>> branches;

    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '[' || std::isalpha(static_cast<unsigned char>(c))) {
        const std::size_t at = pos_;
        const int idx = c == '[' ? ParseBracketAtom() : ParseOrganicAtom();
        if (prev >= 0) AddBond(prev, idx, pending_bond, at);
        pending_bond = 0;
        prev = idx;
      } else if (c == '(') {
        if (prev < 0) Fail("branch before any atom", pos_);
        if (pending_bond != 0) Fail("bond symbol before branch", pending_pos);
        branches.emplace_back(prev, pos_);
        ++pos_;
      } else if (c == ')') {
        if (branches.empty()) Fail("unbalanced ')'", pos_);
        if (pending_bond != 0) Fail("dangling bond symbol", pending_pos);
        if (text_.substr(0, pos_).ends_with('(')) Fail("empty branch", pos_);
        prev = branches.back().first;
        branches.pop_back();
        ++pos_;
      } else if (BondSymbolOrder(c) != 0) {
        if (pending_bond != 0) Fail("consecutive bond symbols", pos_);
        if (prev < 0) Fail("bond without a preceding atom", pos_);
        pending_bond = BondSymbolOrder(c);
        pending_pos = pos_;
        ++pos_;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        if (prev < 0) Fail("ring closure before any atom", pos_);
        const std::size_t at = pos_;
        const int label = ParseRingLabel();
        RingClosure(prev, label, pending_bond, at);
        pending_bond = 0;
      } else if (c == '/' || c == '\\') {
        Fail("directional bonds (stereo) are not supported", pos_);
      } else if (c == '.') {
        Fail("disconnected SMILES are not supported", pos_);
      } else if (c == '*') {
        Fail("wildcard atoms are not supported", pos_);
      } else {
        Fail(fmt::format("unsupported token '{}'", c), pos_);
      }
    }
    if (pending_bond != 0) Fail("dangling bond symbol", pending_pos);
    if (!branches.empty()) Fail("unbalanced '('", branches.back().second);
    if (!open_rings_.empty()) {
      const auto first = std::min_element(
          open_rings_.begin(), open_rings_.end(),
          [](const auto& a, const auto& b) {
            return a.second.position < b.second.position;
          });
      Fail(fmt::format("unmatched ring closure {}", first->first),
           first->second.position);
    }
  }

  int ParseOrganicAtom() {
    const std::size_t at = pos_;
    const char c = text_[pos_];
    ParsedAtom atom;
    atom.position = at;
    if (c == 'C' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'l') {
      atom.atomic_number = 17;
      pos_ += 2;
    } else if (c == 'B' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'r') {
      atom.atomic_number = 35;
      pos_ += 2;
    } else if (IsAromaticSymbol(c)) {
      atom.atomic_number = AromaticAtomicNumber(c);
      atom.aromatic = true;
      ++pos_;
    } else {
      switch (c) {
        case 'B':
        case 'C':
        case 'N':
        case 'O':
        case 'P':
        case 'S':
        case 'F':
        case 'I':
          atom.atomic_number = FindElement(std::string_view(&c, 1))->atomic_number;
          ++pos_;
          break;
        default:
          Fail(fmt::format("unsupported atom '{}' outside brackets", c), at);
      }
    }
    atoms_.push_back(atom);
    return static_cast<int>(atoms_.size()) - 1;
  }

  int ParseBracketAtom() {
    const std::size_t open = pos_++;
    ParsedAtom atom;
    atom.position = open;
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      Fail("isotopes are not supported", pos_);
    }
    if (pos_ >= text_.size()) Fail("unterminated bracket atom", open);
    const char c = text_[pos_];
    if (c == '*') Fail("wildcard atoms are not supported", pos_);
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::string sym(1, c);
      if (pos_ + 1 < text_.size() &&
          std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) {
        const std::string two = sym + text_[pos_ + 1];
        if (FindElement(two)) sym = two;
      }
      const ElementInfo* e = FindElement(sym);
      if (!e) Fail(fmt::format("unsupported element '{}'", sym), pos_);
      atom.atomic_number = e->atomic_number;
      pos_ += sym.size();
    } else if (IsAromaticSymbol(c)) {
      if (pos_ + 1 < text_.size() &&
          std::islower(static_cast<unsigned char>(text_[pos_ + 1])) &&
          text_[pos_ + 1] != 'H') {
        Fail("unsupported aromatic element", pos_);
      }
      atom.atomic_number = AromaticAtomicNumber(c);
      atom.aromatic = true;
      ++pos_;
    } else {
      Fail(fmt::format("unsupported element '{}'", c), pos_);
    }
    if (pos_ < text_.size() && text_[pos_] == '@') {
      Fail("chirality is not supported", pos_);
    }
    int h = 0;
    if (pos_ < text_.size() && text_[pos_] == 'H') {
      ++pos_;
      h = 1;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        h = text_[pos_++] - '0';
      }
    }
    atom.explicit_h = h;
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const char sign = text_[pos_++];
      int mag = 1;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        mag = text_[pos_++] - '0';
      } else {
        while (pos_ < text_.size() && text_[pos_] == sign) {
          ++mag;
          ++pos_;
        }
      }
      atom.charge = sign == '+' ? mag : -mag;
    }
    if (pos_ < text_.size() && text_[pos_] == ':') {
      Fail("atom classes are not supported", pos_);
    }
    if (pos_ >= text_.size() || text_[pos_] != ']') {
      Fail("malformed bracket atom", pos_ < text_.size() ? pos_ : open);
    }
    ++pos_;
    atoms_.push_back(atom);
    return static_cast<int>(atoms_.size()) - 1;
  }

  int ParseRingLabel() {
    if (text_[pos_] == '%') {
      if (pos_ + 2 >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))) {
        Fail("'%' must be followed by two digits", pos_);
      }
      const int label = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
      return label;
    }
    return text_[pos_++] - '0';
  }

  void RingClosure(int atom, int label, int bond_symbol, std::size_t at) {
    auto it = open_rings_.find(label);
    if (it == open_rings_.end()) {
      open_rings_[label] = {atom, bond_symbol, at};
      return;
    }
    const RingOpening opening = it->second;
    open_rings_.erase(it);
    if (opening.bond_symbol != 0 && bond_symbol != 0 &&
        opening.bond_symbol != bond_symbol) {
      Fail("conflicting ring-closure bond symbols", at);
    }
    if (opening.atom == atom) Fail("ring closure onto the same atom", at);
    AddBond(opening.atom, atom, bond_symbol != 0 ? bond_symbol : opening.bond_symbol,
            at);
  }

  void AddBond(int a, int b, int symbol, std::size_t at) {
    for (const auto& bd : bonds_) {
      if ((bd.begin == a && bd.end == b) || (bd.begin == b && bd.end == a)) {
        Fail("duplicate bond", at);
      }
    }
    int order = symbol;
    if (order == 0) {
      order = atoms_[a].aromatic && atoms_[b].aromatic ? kAromaticBond : 1;
    }
    bonds_.push_back({a, b, order});
  }

  // Whether an aromatic atom needs a double bond in the Kekule form.
  bool NeedsPi(int i) const {
    const ParsedAtom& a = atoms_[i];
    int sum = 0;
    for (const auto& b : bonds_) {
      if (b.begin == i || b.end == i) sum += b.order == kAromaticBond ? 1 : b.order;
    }
    const auto allowed = AllowedValences(a.atomic_number, a.charge);
    auto is_allowed = [&](int v) {
      return std::find(allowed.begin(), allowed.end(), v) != allowed.end();
    };
    if (a.explicit_h) {
      const int used = sum + *a.explicit_h;
      return !is_allowed(used) && is_allowed(used + 1);
    }
    const auto v = SmallestValenceAtLeast(a.atomic_number, a.charge, sum);
    return v && *v - sum >= 1;
  }

  void Kekulize() {
    const int n = static_cast<int>(atoms_.size());
    std::vector<bool> needs(static_cast<std::size_t>(n), false);
    bool any_aromatic_bond = false;
    for (const auto& b : bonds_) {
      if (b.order == kAromaticBond) any_aromatic_bond = true;
    }
    if (!any_aromatic_bond) {
      for (const auto& a : atoms_) {
        if (a.aromatic) Fail("aromatic atom outside an aromatic system", a.position);
      }
      return;
    }
    for (int i = 0; i < n; ++i) {
      if (atoms_[i].aromatic) needs[i] = NeedsPi(i);
    }
    // Candidate double bonds: aromatic bonds between two atoms needing one.
    std::vector<std::vector<std::pair<int, int>>> options(static_cast<std::size_t>(n));
    for (std::size_t bi = 0; bi < bonds_.size(); ++bi) {
      const auto& b = bonds_[bi];
      if (b.order != kAromaticBond || !needs[b.begin] || !needs[b.end]) continue;
      options[b.begin].emplace_back(b.end, static_cast<int>(bi));
      options[b.end].emplace_back(b.begin, static_cast<int>(bi));
    }
    std::vector<int> match(static_cast<std::size_t>(n), -1);  // bond index
    long steps = 0;
    auto solve = [&](auto&& self) -> bool {
      if (++steps > 2'000'000) return false;
      // Most constrained unmatched atom first.
      int best = -1;
      int best_free = 1 << 30;
      for (int i = 0; i < n; ++i) {
        if (!needs[i] || match[i] >= 0) continue;
        int free = 0;
        for (const auto& [w, bi] : options[i]) {
          if (match[w] < 0) ++free;
        }
        if (free < best_free) {
          best = i;
          best_free = free;
        }
      }
      if (best < 0) return true;
      if (best_free == 0) return false;
      for (const auto& [w, bi] : options[best]) {
        if (match[w] >= 0) continue;
        match[best] = match[w] = bi;
        if (self(self)) return true;
        match[best] = match[w] = -1;
      }
      return false;
    };
    if (!solve(solve)) {
      std::size_t where = 0;
      for (int i = 0; i < n; ++i) {
        if (needs[i]) {
          where = atoms_[i].position;
          break;
        }
      }
      Fail("cannot kekulize aromatic system", where);
    }
    for (auto& b : bonds_) {
      if (b.order == kAromaticBond) b.order = 1;
    }
    for (int i = 0; i < n; ++i) {
      if (match[i] >= 0) bonds_[static_cast<std::size_t>(match[i])].order = 2;
    }
  }

  Molecule Build() {
    Kekulize();
    MolGraph g;
    for (const auto& a : atoms_) g.AddAtom(a.atomic_number, a.charge, a.explicit_h);
    for (const auto& b : bonds_) g.AddBond(b.begin, b.end, b.order);
    try {
      return Molecule::FromGraph(g);
    } catch (const InvalidMolecule& e) {
      const std::size_t where =
          e.atom() >= 0 ? atoms_[static_cast<std::size_t>(e.atom())].position : 0;
      throw ParseError(e.what(), where);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<ParsedAtom> atoms_;
  std::vector<ParsedBond> bonds_;
  std::map<int, RingOpening> open_rings_;
};

}  // namespace

Molecule ParseSmiles(std::string_view text) { return Parser(text).Run(); }

std::string WriteSmiles(const Molecule& mol) {
  return detail::WriteDepthFirst(mol, detail::RanksFor(mol, true),
                                 detail::SmilesFlavor::kKekule);
}

std::vector<SmilesRecord> ReadSmiles(std::istream& in) {
  std::vector<SmilesRecord> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_first_of(" \t\r", first);
    std::string smiles = line.substr(first, last == std::string::npos
                                                ? std::string::npos
                                                : last - first);
    try {
      Molecule mol = ParseSmiles(smiles);
      out.push_back({std::move(smiles), std::move(mol), number});
    } catch (const ParseError& e) {
      throw ParseError(fmt::format("line {}: {}", number, e.what()), e.position());
    }
  }
  return out;
}

std::vector<SmilesRecord> ReadSmilesFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
  return ReadSmiles(in);
}

}  // namespace molbo::chem
