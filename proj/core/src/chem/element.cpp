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

#include "molbo/chem/element.hpp"

#include <array>

namespace molbo::chem {
namespace {

constexpr std::array<ElementInfo, 10> kElements{{
    {5, "B", 3, 2, false},
    {6, "C", 4, 2, false},
    {7, "N", 5, 2, false},
    {8, "O", 6, 2, false},
    {9, "F", 7, 2, true},
    {15, "P", 5, 3, false},
    {16, "S", 6, 3, false},
    {17, "Cl", 7, 3, true},
    {35, "Br", 7, 4, true},
    {53, "I", 7, 5, true},
}};

}  // namespace

const ElementInfo* FindElement(int atomic_number) {
  for (const auto& e : kElements) {
    if (e.atomic_number == atomic_number) return &e;
  }
  return nullptr;
}

const ElementInfo* FindElement(std::string_view symbol) {
  for (const auto& e : kElements) {
    if (e.symbol == symbol) return &e;
  }
  return nullptr;
}

std::string_view ElementSymbol(int atomic_number) {
  const ElementInfo* e = FindElement(atomic_number);
  return e ? e->symbol : std::string_view("?");
}

std::vector<int> AllowedValences(int atomic_number, int charge) {
  const ElementInfo* info = FindElement(atomic_number);
  if (!info) return {};
  const int electrons = info->valence_electrons - charge;
  if (electrons < 0 || electrons > 8) return {};
  if (electrons <= 4) return {electrons};
  std::vector<int> out{8 - electrons};
  if (info->period >= 3 && !info->halogen) {
    for (int v = 8 - electrons + 2; v <= electrons; v += 2) out.push_back(v);
  }
  return out;
}

std::optional<int> SmallestValenceAtLeast(int atomic_number, int charge,
                                          int bond_sum) {
  for (int v : AllowedValences(atomic_number, charge)) {
    if (v >= bond_sum) return v;
  }
  return std::nullopt;
}

}  // namespace molbo::chem
