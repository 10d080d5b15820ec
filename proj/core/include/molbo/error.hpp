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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace molbo {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied something outside an operation's precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A linear-algebra step failed (e.g. Cholesky after jitter escalation).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// SMILES text could not be parsed. `position()` is a 0-based offset.
class ParseError : public InputError {
 public:
  ParseError(const std::string& message, std::size_t position)
      : InputError(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// The graph violates a molecule invariant (valence, connectivity, ...).
class InvalidMolecule : public InputError {
 public:
  explicit InvalidMolecule(const std::string& message, int atom = -1)
      : InputError(message), atom_(atom) {}

  /// Offending atom index, or -1 when the problem is not local to one atom.
  int atom() const noexcept { return atom_; }

 private:
  int atom_;
};

/// The oracle was asked to score a new molecule with no budget left.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace molbo
