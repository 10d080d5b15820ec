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

#include <optional>
#include <string_view>
#include <vector>

namespace molbo::chem {

struct ElementInfo {
  int atomic_number;
  std::string_view symbol;
  int valence_electrons;
  int period;
  bool halogen;
};

/// Elements the toolkit understands: B C N O P S F Cl Br I.
const ElementInfo* FindElement(int atomic_number);
const ElementInfo* FindElement(std::string_view symbol);

std::string_view ElementSymbol(int atomic_number);

/// Allowed total valences (bond orders + hydrogens) for an element carrying
/// a formal charge, ascending. Empty when the charge state is unsupported.
///
/// Charged atoms take the valences of their isoelectronic neutral neighbour
/// (N+ behaves like C, O- like F, ...). Period-3+ non-halogens also admit
/// expanded octets in steps of two (S: 2/4/6, P: 3/5).
std::vector<int> AllowedValences(int atomic_number, int charge);

/// Smallest allowed valence >= `bond_sum`, if any.
std::optional<int> SmallestValenceAtLeast(int atomic_number, int charge,
                                          int bond_sum);

}  // namespace molbo::chem
