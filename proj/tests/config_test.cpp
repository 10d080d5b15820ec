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

#include <cstdlib>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "molbo/config.hpp"
#include "molbo/error.hpp"

namespace molbo::config {
namespace {

RunConfig Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseConfig(in, "test.cfg");
}

std::string ErrorOf(const std::string& text) {
  try {
    Parse(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseConfig, EmptyGivesDefaults) {
  const auto cfg = Parse("");
  EXPECT_EQ(cfg.objective.name, "celecoxib_rediscovery");
  EXPECT_EQ(cfg.bo.n_init, 10);
  EXPECT_EQ(cfg.bo.ga.population_size, 100);
  EXPECT_EQ(cfg.bench_seeds.size(), 5u);
}

TEST(ParseConfig, Values) {
  const auto cfg = Parse(R"(
# comment
[run]
output_dir = out/x
seed = 42

[objective]
name = median1

[bo]
acquisition = ei
kernel_amplitude = 0.5
n_init = 3
bo_iterations = 4
total_budget = 20
final_fill = random

[ga]
offspring_size = 6
generations = 1
mutation_rate = 0.3

[bench]
objectives = median1, median2
seeds = 3..5
)");
  EXPECT_EQ(cfg.output_dir, "out/x");
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.bo.rng_seed, 42u);
  EXPECT_EQ(cfg.objective.family, objectives::Family::kMedian);
  EXPECT_EQ(cfg.bo.acquisition, bo::AcquisitionMode::kEi);
  EXPECT_EQ(cfg.bo.gp.kernel.amplitude, 0.5);
  EXPECT_EQ(cfg.bo.final_fill, bo::FillStrategy::kRandom);
  EXPECT_EQ(cfg.bo.ga.offspring_size, 6);
  EXPECT_EQ(cfg.bo.ga.mutation_rate, 0.3);
  EXPECT_EQ(cfg.bench_objectives, (std::vector<std::string>{"median1", "median2"}));
  EXPECT_EQ(cfg.bench_seeds, (std::vector<std::uint64_t>{3, 4, 5}));
}

TEST(ParseConfig, CustomObjective) {
  const auto cfg = Parse(
      "[objective]\nname = my_iso\nfamily = isomer\nformula = C5H12\ntargets =\n");
  EXPECT_EQ(cfg.objective.name, "my_iso");
  EXPECT_EQ(cfg.objective.family, objectives::Family::kIsomer);
  EXPECT_EQ(cfg.objective.formula, "C5H12");
}

TEST(ParseConfig, RejectsUnknownKeysByName) {
  EXPECT_NE(ErrorOf("[bo]\nbogus_knob = 1\n").find("bo.bogus_knob"), std::string::npos);
  EXPECT_NE(ErrorOf("[nope]\n").find("nope"), std::string::npos);
  EXPECT_NE(ErrorOf("n_init = 3\n").find("outside a section"), std::string::npos);
}

TEST(ParseConfig, RejectsMalformed) {
  EXPECT_NE(ErrorOf("[bo]\nn_init = ten\n").find("test.cfg:2"), std::string::npos);
  EXPECT_FALSE(ErrorOf("[bo\n").empty());
  EXPECT_FALSE(ErrorOf("[bo]\nn_init\n").empty());
  EXPECT_FALSE(ErrorOf("[bo]\nn_init = 1\nn_init = 2\n").empty());
  EXPECT_FALSE(ErrorOf("[bo]\nn_init = 300\nbo_iterations = 300\n").empty());
  EXPECT_FALSE(ErrorOf("[objective]\nname = nope\n").empty());
  EXPECT_FALSE(ErrorOf("[bo]\nacquisition = magic\n").empty());
  EXPECT_FALSE(ErrorOf("[bench]\nseeds = 5..3\n").empty());
}

TEST(FormatConfig, RoundTrips) {
  const auto cfg = Parse("[run]\nseed = 7\n[bo]\nacquisition = pi\nnoise_variance = 0.001\n"
                         "[ga]\ngenerations = 2\n[bench]\nseeds = 1,4\n");
  const auto text = FormatConfig(cfg);
  const auto back = Parse(text);
  EXPECT_EQ(FormatConfig(back), text);
  EXPECT_EQ(back.bo.gp.noise_variance, 0.001);
  EXPECT_EQ(back.bench_seeds, (std::vector<std::uint64_t>{1, 4}));
  EXPECT_NE(text.find("[ga]\n"), std::string::npos);
  EXPECT_NE(text.find("mutation_rate = 0.2\n"), std::string::npos);
}

TEST(ParseSeedList, Forms) {
  EXPECT_EQ(ParseSeedList("0..4").size(), 5u);
  EXPECT_EQ(ParseSeedList("7"), std::vector<std::uint64_t>{7});
  EXPECT_EQ(ParseSeedList("1, 3"), (std::vector<std::uint64_t>{1, 3}));
  EXPECT_THROW(ParseSeedList("a..b"), InputError);
  EXPECT_THROW(ParseSeedList(""), InputError);
}

TEST(ResolveOutputDir, EnvironmentOverride) {
  ::unsetenv(kOutputRootEnv);
  EXPECT_EQ(ResolveOutputDir("runs/a"), std::filesystem::path("runs/a"));
  ::setenv(kOutputRootEnv, "/tmp/root", 1);
  EXPECT_EQ(ResolveOutputDir("runs/a"), std::filesystem::path("/tmp/root/runs/a"));
  EXPECT_EQ(ResolveOutputDir("/abs"), std::filesystem::path("/abs"));
  ::unsetenv(kOutputRootEnv);
}

TEST(LoadConfig, MissingFile) {
  EXPECT_THROW(LoadConfig("/nonexistent/molbo.cfg"), InputError);
}

}  // namespace
}  // namespace molbo::config
