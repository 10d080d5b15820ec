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

#include <filesystem>
#include <vector>

#include <benchmark/benchmark.h>

#include "molbo/chem/fingerprint.hpp"
#include "molbo/chem/smiles.hpp"
#include "molbo/ga.hpp"
#include "molbo/gp.hpp"
#include "molbo/rng.hpp"

namespace molbo {
namespace {

constexpr const char* kCelecoxib = "Cc1ccc(cc1)-c1cc(nn1-c1ccc(cc1)S(N)(=O)=O)C(F)(F)F";

std::vector<chem::Molecule> Seeds() {
  std::vector<chem::Molecule> mols;
  for (auto& rec : chem::ReadSmilesFile(std::filesystem::path(MOLBO_DATA_DIR) / "seeds.smi")) {
    mols.push_back(std::move(rec.mol));
  }
  return mols;
}

std::vector<chem::Fingerprint> SeedFingerprints() {
  std::vector<chem::Fingerprint> fps;
  for (const auto& m : Seeds()) fps.push_back(chem::MorganFingerprint(m, 2, chem::FpMode::kCount));
  return fps;
}

void BM_ParseSmiles(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(chem::ParseSmiles(kCelecoxib));
}
BENCHMARK(BM_ParseSmiles);

void BM_WriteSmiles(benchmark::State& state) {
  const auto mol = chem::ParseSmiles(kCelecoxib);
  for (auto _ : state) benchmark::DoNotOptimize(chem::WriteSmiles(mol));
}
BENCHMARK(BM_WriteSmiles);

void BM_MorganFingerprint(benchmark::State& state) {
  const auto mol = chem::ParseSmiles(kCelecoxib);
  const int radius = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(chem::MorganFingerprint(mol, radius, chem::FpMode::kCount));
  }
}
BENCHMARK(BM_MorganFingerprint)->Arg(1)->Arg(2)->Arg(3);

void BM_Tanimoto(benchmark::State& state) {
  const auto fps = SeedFingerprints();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chem::Tanimoto(fps[i % fps.size()], fps[(i + 1) % fps.size()]));
    ++i;
  }
}
BENCHMARK(BM_Tanimoto);

void BM_GpFitTanimoto(benchmark::State& state) {
  auto fps = SeedFingerprints();
  fps.resize(static_cast<std::size_t>(state.range(0)), fps.front());
  std::vector<double> y(fps.size());
  Rng rng(1);
  for (auto& v : y) v = rng.Uniform();
  const gp::GPConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gp::PosteriorState<chem::Fingerprint>::Fit(fps, y, cfg));
  }
}
BENCHMARK(BM_GpFitTanimoto)->Arg(50)->Arg(200);

void BM_GpPredictTanimoto(benchmark::State& state) {
  const auto fps = SeedFingerprints();
  std::vector<chem::Fingerprint> train(fps.begin(), fps.begin() + 60);
  std::vector<double> y(train.size());
  Rng rng(2);
  for (auto& v : y) v = rng.Uniform();
  const auto post = gp::PosteriorState<chem::Fingerprint>::Fit(train, y, gp::GPConfig{});
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(post.Predict(fps[i++ % fps.size()]));
}
BENCHMARK(BM_GpPredictTanimoto);

void BM_Mutate(benchmark::State& state) {
  const auto seeds = Seeds();
  Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ga::Mutate(seeds[rng.UniformIndex(seeds.size())], rng));
  }
}
BENCHMARK(BM_Mutate);

void BM_Crossover(benchmark::State& state) {
  const auto seeds = Seeds();
  Rng rng(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ga::Crossover(seeds[rng.UniformIndex(seeds.size())],
                                           seeds[rng.UniformIndex(seeds.size())], rng));
  }
}
BENCHMARK(BM_Crossover);

}  // namespace
}  // namespace molbo

BENCHMARK_MAIN();
