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

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "molbo/bo.hpp"
#include "molbo/chem/canon.hpp"
#include "molbo/chem/fingerprint.hpp"
#include "molbo/chem/smiles.hpp"
#include "molbo/config.hpp"
#include "molbo/error.hpp"
#include "molbo/objectives.hpp"
#include "molbo/pitfalls.hpp"

namespace molbo::cli {
namespace fs = std::filesystem;
namespace {

constexpr int kAucK = 10;

/// Raised when a demo check fails; maps to exit code 2.
class AssertionFailure : public Error {
 public:
  using Error::Error;
};

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError(fmt::format("cannot write '{}'", path.string()));
  f << text;
  if (!f) throw InputError(fmt::format("error writing '{}'", path.string()));
}

std::vector<chem::Molecule> LoadSeeds(const config::RunConfig& cfg) {
  const fs::path path =
      cfg.seeds_file.empty() ? config::DefaultSeedsFile() : fs::path(cfg.seeds_file);
  std::vector<chem::Molecule> mols;
  for (auto& rec : chem::ReadSmilesFile(path)) mols.push_back(std::move(rec.mol));
  return mols;
}

struct CellResult {
  double auc = 0.0;
  double best = 0.0;
  int evaluations = 0;
};

// One BO run written to `dir`.
CellResult RunCell(const config::RunConfig& cfg, std::span<const chem::Molecule> seeds,
                   const fs::path& dir) {
  fs::create_directories(dir);
  WriteFile(dir / "config.resolved", config::FormatConfig(cfg));
  const objectives::Objective objective(cfg.objective);
  const auto result = bo::RunBo(cfg.bo, objective, seeds);

  std::ostringstream history;
  result.history.WriteJsonl(history);
  WriteFile(dir / "history.jsonl", history.str());
  std::ostringstream rounds;
  bo::WriteRoundsJsonl(rounds, result.rounds);
  WriteFile(dir / "rounds.jsonl", rounds.str());

  CellResult cell;
  cell.auc = objectives::AucTopK(result.history, kAucK, cfg.bo.total_budget);
  cell.best = result.y_best;
  cell.evaluations = static_cast<int>(result.history.size());
  const auto table = objectives::SummarizeRuns({{cfg.objective.name, {cell.auc}}});
  WriteFile(dir / "summary.tsv", table.ToTsv());
  if (!result.log.empty()) {
    std::string log;
    for (const auto& line : result.log) log += line + '\n';
    WriteFile(dir / "run.log", log);
  }
  return cell;
}

int CmdDemo1d(const std::string& out_dir, std::ostream& out) {
  const auto problem = pitfalls::Demo1DProblem::Default();
  const fs::path dir = config::ResolveOutputDir(out_dir);
  fs::create_directories(dir);
  for (const auto& sweep :
       pitfalls::RunSweeps(problem, pitfalls::kDefaultSigmas, pitfalls::kDefaultLengthscales)) {
    std::ostringstream csv;
    sweep.WriteCsv(csv);
    WriteFile(dir / sweep.FileName(), csv.str());
  }
  const auto report = pitfalls::AssertPitfalls(problem);
  for (const auto& c : report.checks) out << c.Line() << '\n';
  if (!report.AllPassed()) throw AssertionFailure("pitfall checks failed");
  return kExitOk;
}

int CmdFp(const std::string& smiles, int radius, const std::string& mode, std::ostream& out) {
  const auto mol = chem::ParseSmiles(smiles);
  const auto fp = chem::MorganFingerprint(mol, radius, chem::ParseFpMode(mode));
  out << "smiles\t" << chem::WriteSmiles(mol) << '\n';
  out << "key\t" << chem::CanonicalKey(mol) << '\n';
  out << "formula\t" << chem::FormatFormula(chem::MolecularFormula(mol)) << '\n';
  out << "heavy_atoms\t" << chem::HeavyAtomCount(mol) << '\n';
  out << "features\t" << fp.size() << '\n';
  out << "total_count\t" << fp.TotalCount() << '\n';
  for (const auto& [id, count] : fp.entries()) {
    out << fmt::format("{:016x}\t{}\n", id, count);
  }
  return kExitOk;
}

int CmdFpCompare(const std::string& a_smiles, const std::string& b_smiles, int radius,
                 std::ostream& out) {
  const auto a = chem::ParseSmiles(a_smiles);
  const auto b = chem::ParseSmiles(b_smiles);
  const auto a_bin = chem::MorganFingerprint(a, radius, chem::FpMode::kBinary);
  const auto b_bin = chem::MorganFingerprint(b, radius, chem::FpMode::kBinary);
  const auto a_cnt = chem::MorganFingerprint(a, radius, chem::FpMode::kCount);
  const auto b_cnt = chem::MorganFingerprint(b, radius, chem::FpMode::kCount);
  out << "radius\t" << radius << '\n';
  out << "binary_tanimoto\t" << fmt::format("{:.6f}", chem::Tanimoto(a_bin, b_bin)) << '\n';
  out << "count_tanimoto\t" << fmt::format("{:.6f}", chem::Tanimoto(a_cnt, b_cnt)) << '\n';
  out << "binary_identical\t" << (a_bin == b_bin ? "yes" : "no") << '\n';
  return kExitOk;
}

int CmdRun(const std::string& config_path, const std::string& output, std::ostream& out) {
  auto cfg = config::LoadConfig(config_path);
  if (!output.empty()) cfg.output_dir = output;
  const auto seeds = LoadSeeds(cfg);
  const fs::path dir = config::ResolveOutputDir(cfg.output_dir);
  const auto cell = RunCell(cfg, seeds, dir);
  out << fmt::format("objective\t{}\nseed\t{}\nevaluations\t{}\nbest\t{:.6f}\nauc_top10\t{:.6f}\n",
                     cfg.objective.name, cfg.seed, cell.evaluations, cell.best, cell.auc);
  out << "output\t" << dir.string() << '\n';
  return kExitOk;
}

int CmdBench(const std::string& config_path, const std::string& seeds_text,
             const std::string& objectives_text, const std::string& output, std::ostream& out) {
  auto cfg = config::LoadConfig(config_path);
  if (!output.empty()) cfg.output_dir = output;
  if (!seeds_text.empty()) cfg.bench_seeds = config::ParseSeedList(seeds_text);
  if (!objectives_text.empty()) {
    std::istringstream in(std::string("[bench]\nobjectives = ") + objectives_text + "\n");
    cfg.bench_objectives = config::ParseConfig(in, "--objectives").bench_objectives;
  }
  cfg.Validate();
  const auto names =
      cfg.bench_objectives.empty() ? objectives::BuiltinObjectiveNames() : cfg.bench_objectives;
  const auto seeds = LoadSeeds(cfg);
  const fs::path root = config::ResolveOutputDir(cfg.output_dir);
  fs::create_directories(root);
  WriteFile(root / "config.resolved", config::FormatConfig(cfg));

  struct Cell {
    config::RunConfig cfg;
    fs::path dir;
    CellResult result;
    std::exception_ptr error;
  };
  std::vector<Cell> cells;
  for (const auto& name : names) {
    for (auto seed : cfg.bench_seeds) {
      Cell c;
      c.cfg = cfg;
      c.cfg.objective = objectives::BuiltinObjective(name);
      c.cfg.seed = seed;
      c.cfg.bo.rng_seed = seed;
      c.dir = root / name / fmt::format("seed{}", seed);
      c.cfg.output_dir = c.dir.string();
      cells.push_back(std::move(c));
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        cells[i].result = RunCell(cells[i].cfg, seeds, cells[i].dir);
      } catch (...) {
        cells[i].error = std::current_exception();
      }
    }
  };
  {
    const int n = std::min<int>(cfg.bench_threads, static_cast<int>(cells.size()));
    std::vector<std::jthread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& c : cells) {
    if (c.error) std::rethrow_exception(c.error);
  }

  std::map<std::string, std::vector<double>> aucs;
  for (const auto& c : cells) aucs[c.cfg.objective.name].push_back(c.result.auc);
  const auto table = objectives::SummarizeRuns(aucs);
  WriteFile(root / "summary.tsv", table.ToTsv());
  out << table.Format();
  return kExitOk;
}

int CmdReport(const std::string& dir, std::ostream& out) {
  if (!fs::is_directory(dir)) throw InputError(fmt::format("'{}' is not a directory", dir));
  std::vector<fs::path> histories;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().filename() == "history.jsonl") {
      histories.push_back(e.path());
    }
  }
  std::sort(histories.begin(), histories.end());
  if (histories.empty()) throw InputError(fmt::format("no history.jsonl under '{}'", dir));

  std::map<std::string, std::vector<double>> aucs;
  for (const auto& path : histories) {
    const auto cfg = config::LoadConfig(path.parent_path() / "config.resolved");
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
    const auto history = objectives::RunHistory::ReadJsonl(in);
    aucs[cfg.objective.name].push_back(
        objectives::AucTopK(history, kAucK, cfg.bo.total_budget));
  }
  out << objectives::SummarizeRuns(aucs).Format();
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Molecular Bayesian optimization toolkit"};
  app.name(args.empty() ? "molbo" : args.front());
  app.require_subcommand(1);

  std::string demo_out = "demo1d";
  auto* demo = app.add_subcommand("demo1d", "1-D pitfall sweeps (CSV) and ordering checks");
  demo->add_option("--out", demo_out, "Directory for the sweep CSVs");

  std::string fp_smiles;
  std::string fp_mode = "count";
  int radius = 2;
  auto* fp = app.add_subcommand("fp", "Fingerprint diagnostics for one molecule");
  fp->add_option("smiles", fp_smiles)->required();
  fp->add_option("--radius", radius)->check(CLI::Range(0, chem::kMaxFingerprintRadius));
  fp->add_option("--mode", fp_mode)->check(CLI::IsMember({"binary", "count"}));

  std::string cmp_a;
  std::string cmp_b;
  auto* cmp = app.add_subcommand("fp-compare", "Binary and count Tanimoto of two molecules");
  cmp->add_option("a", cmp_a)->required();
  cmp->add_option("b", cmp_b)->required();
  cmp->add_option("--radius", radius)->check(CLI::Range(0, chem::kMaxFingerprintRadius));

  std::string config_path;
  std::string output;
  auto* run = app.add_subcommand("run", "Single BO run");
  run->add_option("--config", config_path)->required();
  run->add_option("--output", output, "Override run.output_dir");

  std::string seeds_text;
  std::string objectives_text;
  auto* bench = app.add_subcommand("bench", "Multi-seed, multi-objective harness");
  bench->add_option("--config", config_path)->required();
  bench->add_option("--seeds", seeds_text, "Seed range a..b (overrides bench.seeds)");
  bench->add_option("--objectives", objectives_text, "Comma list (overrides bench.objectives)");
  bench->add_option("--output", output, "Override run.output_dir");

  std::string report_dir;
  auto* report = app.add_subcommand("report", "AUC Top-10 summary of finished runs");
  report->add_option("dir", report_dir)->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*demo) return CmdDemo1d(demo_out, out);
    if (*fp) return CmdFp(fp_smiles, radius, fp_mode, out);
    if (*cmp) return CmdFpCompare(cmp_a, cmp_b, radius, out);
    if (*run) return CmdRun(config_path, output, out);
    if (*bench) return CmdBench(config_path, seeds_text, objectives_text, output, out);
    if (*report) return CmdReport(report_dir, out);
  } catch (const AssertionFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitAssertionFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace molbo::cli
