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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "molbo/chem/canon.hpp"
#include "molbo/chem/fingerprint.hpp"
#include "molbo/chem/smiles.hpp"
#include "molbo/error.hpp"
#include "molbo/objectives.hpp"
#include "molbo/rng.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

namespace molbo::objectives {
namespace {

using chem::ParseSmiles;

TEST(Objective, RediscoveryOfTargetIsOne) {
  const Objective obj(BuiltinObjective("celecoxib_rediscovery"));
  EXPECT_EQ(obj.Evaluate(ParseSmiles(testing::kCelecoxibKekule)), 1.0);
  EXPECT_EQ(obj.Evaluate(ParseSmiles(testing::kCelecoxibAromatic)), 1.0);
  const double other = obj.Evaluate(ParseSmiles("CCO"));
  EXPECT_GE(other, 0.0);
  EXPECT_LT(other, 1.0);
}

TEST(Objective, IsomerExactAndOffByOne) {
  ObjectiveSpec spec;
  spec.name = "pentane_isomers";
  spec.family = Family::kIsomer;
  spec.formula = "C5H12";
  const Objective obj(spec);
  EXPECT_EQ(obj.Evaluate(ParseSmiles("CCCCC")), 1.0);
  EXPECT_EQ(obj.Evaluate(ParseSmiles("CC(C)(C)C")), 1.0);
  // Pentanol: one extra O.
  EXPECT_NEAR(obj.Evaluate(ParseSmiles("CCCCCO")), std::exp(-0.25), 1e-15);
  // Butane: one C and two H short.
  EXPECT_NEAR(obj.Evaluate(ParseSmiles("CCCC")), std::exp(-0.75), 1e-15);
}

TEST(Objective, MedianAtFirstTargetIsSqrtOfPairSimilarity) {
  ObjectiveSpec spec;
  spec.name = "m";
  spec.family = Family::kMedian;
  spec.targets = {"CCOc1ccccc1", "CC(=O)Nc1ccc(O)cc1"};
  const Objective obj(spec);
  const auto a = chem::MorganFingerprint(ParseSmiles(spec.targets[0]), 2, chem::FpMode::kCount);
  const auto b = chem::MorganFingerprint(ParseSmiles(spec.targets[1]), 2, chem::FpMode::kCount);
  const double t = testing::MapTanimoto(a, b);
  EXPECT_GT(t, 0.0);
  EXPECT_NEAR(obj.Evaluate(ParseSmiles(spec.targets[0])), std::sqrt(t), 1e-15);
}

TEST(Objective, BuiltinsScoreInUnitInterval) {
  const auto corpus = testing::SmallCorpus();
  for (const auto& name : BuiltinObjectiveNames()) {
    const Objective obj(BuiltinObjective(name));
    for (const auto& s : corpus) {
      const double v = obj.Evaluate(ParseSmiles(s));
      EXPECT_GE(v, 0.0) << name << " " << s;
      EXPECT_LE(v, 1.0) << name << " " << s;
    }
  }
  EXPECT_THROW(BuiltinObjective("valsartan_smarts"), InputError);
}

TEST(ObjectiveSpec, TargetArity) {
  ObjectiveSpec spec;
  spec.family = Family::kMedian;
  spec.targets = {"CC"};
  EXPECT_THROW(spec.Validate(), InputError);
  spec.family = Family::kRediscovery;
  EXPECT_NO_THROW(spec.Validate());
  spec.targets.push_back("CCC");
  EXPECT_THROW(spec.Validate(), InputError);
  spec.family = Family::kIsomer;
  spec.targets.clear();
  EXPECT_THROW(spec.Validate(), InputError);
}

TEST(Oracle, CacheAndBudget) {
  const Objective obj(BuiltinObjective("albuterol_similarity"));
  Oracle oracle(obj, 2);
  const auto a = oracle.Call(ParseSmiles("CCO"), Provenance::kInit);
  EXPECT_FALSE(a.cache_hit);
  const auto again = oracle.Call(ParseSmiles("OCC"), Provenance::kBo);
  EXPECT_TRUE(again.cache_hit);
  EXPECT_EQ(again.score, a.score);
  EXPECT_EQ(oracle.calls_used(), 1);
  EXPECT_EQ(oracle.history().size(), 1u);
  oracle.Call(ParseSmiles("CCN"), Provenance::kBo);
  EXPECT_EQ(oracle.remaining(), 0);
  EXPECT_THROW(oracle.Call(ParseSmiles("CCC"), Provenance::kBo), BudgetExhausted);
  EXPECT_TRUE(oracle.Call(ParseSmiles("NCC"), Provenance::kFill).cache_hit);
}

TEST(Oracle, BudgetOneSecondDistinctThrows) {
  const Objective obj(BuiltinObjective("celecoxib_rediscovery"));
  Oracle oracle(obj, 1);
  oracle.Call(ParseSmiles("C"), Provenance::kInit);
  EXPECT_THROW(oracle.Call(ParseSmiles("N"), Provenance::kInit), BudgetExhausted);
}

TEST(RunHistory, TopTenMeanMatchesResort) {
  Rng rng(1);
  RunHistory h;
  std::vector<double> scores;
  for (int i = 0; i < 60; ++i) {
    const double s = rng.Uniform();
    scores.push_back(s);
    h.Append("k" + std::to_string(i), "C", s, Provenance::kBo);
    auto sorted = scores;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const std::size_t m = std::min<std::size_t>(10, sorted.size());
    double want = 0.0;
    for (std::size_t j = 0; j < m; ++j) want += sorted[j];
    want /= static_cast<double>(m);
    EXPECT_NEAR(h.entries().back().top10_mean, want, 1e-12);
    EXPECT_EQ(h.entries().back().call_index, i + 1);
    if (i >= 10) EXPECT_GE(h.entries()[i].top10_mean, h.entries()[i - 1].top10_mean);
  }
  EXPECT_EQ(h.BestScore(), *std::max_element(scores.begin(), scores.end()));
}

TEST(RunHistory, JsonlRoundTrip) {
  RunHistory h;
  h.Append("[CH4]", "C", 0.25, Provenance::kInit);
  h.Append("[OH2]", "O", 1.0 / 3.0, Provenance::kBo);
  h.Append("[NH3]", "N", 0.5, Provenance::kFill);
  std::ostringstream out;
  h.WriteJsonl(out);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            R"({"call_index":1,"key":"[CH4]","smiles":"C","score":0.25,"provenance":"init","top10_mean":0.25})");
  std::istringstream in(text);
  const auto back = RunHistory::ReadJsonl(in);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back.entries()[1].score, 1.0 / 3.0);
  EXPECT_EQ(back.entries()[2].provenance, Provenance::kFill);
  std::ostringstream again;
  back.WriteJsonl(again);
  EXPECT_EQ(again.str(), text);
}

TEST(AucTopK, ConstantHistory) {
  for (int t : {1, 7, 50}) {
    const std::vector<double> s(static_cast<std::size_t>(t), 0.37);
    EXPECT_EQ(AucTopK(s, 10, 100), 0.37);
  }
  EXPECT_EQ(AucTopK(std::vector<double>{1.0}, 10, 100), 1.0);
}

TEST(AucTopK, MatchesBruteForce) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int t = 1 + static_cast<int>(rng.UniformIndex(80));
    std::vector<double> s(static_cast<std::size_t>(t));
    for (auto& v : s) v = rng.Uniform();
    const int budget = t + static_cast<int>(rng.UniformIndex(40));
    const int k = 1 + static_cast<int>(rng.UniformIndex(12));
    EXPECT_NEAR(AucTopK(s, k, budget), testing::BruteForceAuc(s, k, budget), 1e-12);
  }
}

TEST(AucTopK, MonotoneInAnySingleScore) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(30);
    for (auto& v : s) v = rng.Uniform();
    const double base = AucTopK(s, 10, 40);
    const std::size_t i = rng.UniformIndex(s.size());
    s[i] = std::min(1.0, s[i] + rng.Uniform(0.0, 0.5));
    EXPECT_GE(AucTopK(s, 10, 40), base - 1e-15);
  }
}

TEST(AucTopK, Errors) {
  EXPECT_THROW(AucTopK(std::vector<double>{}, 10, 10), InputError);
  EXPECT_THROW(AucTopK(std::vector<double>{0.1, 0.2}, 10, 1), InputError);
}

TEST(SummarizeRuns, MeanStdAndSum) {
  const auto table = SummarizeRuns({{"a", {0.4, 0.6}}, {"b", {0.3}}});
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_NEAR(table.rows[0].mean, 0.5, 1e-15);
  EXPECT_NEAR(table.rows[0].std, 0.141421356237310, 1e-12);
  EXPECT_EQ(table.rows[1].std, 0.0);
  EXPECT_NEAR(table.sum_of_means, 0.8, 1e-12);
  const auto tsv = table.ToTsv();
  EXPECT_EQ(tsv.substr(0, tsv.find('\n')), "objective\tmean\tstd\tseeds");
  EXPECT_NE(table.Format().find("Sum"), std::string::npos);
}

}  // namespace
}  // namespace molbo::objectives
