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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "molbo/bo.hpp"
#include "molbo/objectives.hpp"

namespace molbo::config {

/// Everything needed to re-execute a run or a benchmark. File format:
///
///   # comment
///   [section]
///   key = value
///
/// Sections: run, objective, bo, ga, bench. Unknown sections or keys are
/// rejected by name. Omitted keys keep the defaults below.
struct RunConfig {
  // [run]
  std::string output_dir = "runs/default";
  /// Empty means the bundled seed file.
  std::string seeds_file;
  /// Also copied into bo.rng_seed.
  std::uint64_t seed = 0;

  // [objective]: a builtin name, or a custom spec when `family` is set.
  objectives::ObjectiveSpec objective = objectives::BuiltinObjective("celecoxib_rediscovery");

  // [bo] and [ga]
  bo::BOConfig bo;

  // [bench]
  /// Empty means every builtin objective.
  std::vector<std::string> bench_objectives;
  std::vector<std::uint64_t> bench_seeds = {0, 1, 2, 3, 4};
  int bench_threads = 1;

  void Validate() const;
};

/// Throws InputError with the source name and line number on bad input.
RunConfig ParseConfig(std::istream& in, std::string_view source = "<config>");
/// Throws InputError if the file cannot be opened.
RunConfig LoadConfig(const std::filesystem::path& path);

/// Every key with its effective value; parses back to the same config.
std::string FormatConfig(const RunConfig& cfg);

/// "a..b" (inclusive) or a comma list; throws InputError.
std::vector<std::uint64_t> ParseSeedList(std::string_view text);

/// Bundled seed SMILES.
std::filesystem::path DefaultSeedsFile();

/// Environment variable overriding the root of relative output paths.
inline constexpr const char* kOutputRootEnv = "MOLBO_OUTPUT_ROOT";

/// `dir` prefixed with $MOLBO_OUTPUT_ROOT when that is set and `dir` is
/// relative.
std::filesystem::path ResolveOutputDir(const std::filesystem::path& dir);

}  // namespace molbo::config
