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

#include "molbo/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "molbo/error.hpp"

namespace molbo::config {
namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitList(std::string_view s, char sep) {
  std::vector<std::string> out;
  while (true) {
    const auto pos = s.find(sep);
    const auto item = Trim(s.substr(0, pos));
    if (!item.empty()) out.emplace_back(item);
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

template <typename T>
T ParseNumber(std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw InputError(fmt::format("invalid number '{}'", text));
  }
  return value;
}

std::string JoinSeeds(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    out += (i ? "," : "") + std::to_string(seeds[i]);
  }
  return out;
}

std::string JoinStrings(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

struct Field {
  std::string_view section;
  std::string_view key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
std::string Fmt(T v) {
  return fmt::format("{}", v);
}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      {"run", "output_dir", [](RunConfig& c, std::string_view v) { c.output_dir = v; },
       [](const RunConfig& c) { return c.output_dir; }},
      {"run", "seeds_file", [](RunConfig& c, std::string_view v) { c.seeds_file = v; },
       [](const RunConfig& c) { return c.seeds_file; }},
      {"run", "seed",
       [](RunConfig& c, std::string_view v) { c.seed = ParseNumber<std::uint64_t>(v); },
       [](const RunConfig& c) { return Fmt(c.seed); }},

      {"objective", "name", [](RunConfig& c, std::string_view v) { c.objective.name = v; },
       [](const RunConfig& c) { return c.objective.name; }},
      {"objective", "family",
       [](RunConfig& c, std::string_view v) { c.objective.family = objectives::ParseFamily(v); },
       [](const RunConfig& c) { return std::string(objectives::FamilyName(c.objective.family)); }},
      {"objective", "targets",
       [](RunConfig& c, std::string_view v) { c.objective.targets = SplitList(v, ' '); },
       [](const RunConfig& c) { return JoinStrings(c.objective.targets, " "); }},
      {"objective", "formula", [](RunConfig& c, std::string_view v) { c.objective.formula = v; },
       [](const RunConfig& c) { return c.objective.formula; }},
      {"objective", "radius",
       [](RunConfig& c, std::string_view v) { c.objective.radius = ParseNumber<int>(v); },
       [](const RunConfig& c) { return Fmt(c.objective.radius); }},

      {"bo", "acquisition",
       [](RunConfig& c, std::string_view v) { c.bo.acquisition = bo::ParseAcquisitionMode(v); },
       [](const RunConfig& c) { return std::string(bo::AcquisitionModeName(c.bo.acquisition)); }},
      {"bo", "kernel_amplitude",
       [](RunConfig& c, std::string_view v) {
         c.bo.gp.kernel.amplitude = ParseNumber<double>(v);
       },
       [](const RunConfig& c) { return Fmt(c.bo.gp.kernel.amplitude); }},
      {"bo", "noise_variance",
       [](RunConfig& c, std::string_view v) { c.bo.gp.noise_variance = ParseNumber<double>(v); },
       [](const RunConfig& c) { return Fmt(c.bo.gp.noise_variance); }},
      {"bo", "prior_mean",
       [](RunConfig& c, std::string_view v) { c.bo.gp.prior_mean = ParseNumber<double>(v); },
       [](const RunConfig& c) { return Fmt(c.bo.gp.prior_mean); }},
      {"bo", "fp_radius",
       [](RunConfig& c, std::string_view v) { c.bo.fp_radius = ParseNumber<int>(v); },
       [](const RunConfig& c) { return Fmt(c.bo.fp_radius); }},
      {"bo", "fp_mode",
       [](RunConfig& c, std::string_view v) { c.bo.fp_mode = chem::ParseFpMode(v); },
       [](const RunConfig& c) { return std::string(chem::FpModeName(c.bo.fp_mode)); }},
      {"bo", "beta_log10_low",
       [](RunConfig& c, std::string_view v) { c.bo.beta.log10_low = ParseNumber<double>(v); },
       [](const RunConfig& c) { return Fmt(c.bo.beta.log10_low); }},
      {"bo", "beta_log10_high",
       [](RunConfig& c, std::string_view v) { c.bo.beta.log10_high = ParseNumber<double>(v); },
       [](const RunConfig& c) { return Fmt(c.bo.beta.log10_high); }},
      {"bo", "n_init", [](RunConfig& c, std::string_view v) { c.bo.n_init = ParseNumber<int>(v); },
       [](const RunConfig& c) { return Fmt(c.bo.n_init); }},
      {"bo", "bo_iterations",
       [](RunConfig& c, std::string_view v) { c.bo.bo_iterations = ParseNumber<int>(v); },
       [](const RunConfig& c) { return Fmt(c.bo.bo_iterations); }},
      {"bo", "total_budget",
       [](RunConfig& c, std::string_view v) { c.bo.total_budget = ParseNumber<int>(v); },
       [](const RunConfig& c) { return Fmt(c.bo.total_budget); }},
      {"bo", "final_fill",
       [](RunConfig& c, std::string_view v) { c.bo.final_fill = bo::ParseFillStrategy(v); },
       [](const RunConfig& c) { return std::string(bo::FillStrategyName(c.bo.final_fill)); }},
      {"bo", "seed_evaluated",
       [](RunConfig& c, std::string_view v) { c.bo.seed_evaluated = ParseNumber<int>(v); },
       [](const RunConfig& c) { return Fmt(c.bo.seed_evaluated); }},
      {"bo", "seed_pooled",
       [](RunConfig& c, std::string_view v) { c.bo.seed_pooled = ParseNumber<int>(v); },
       [](const RunConfig& c) { return Fmt(c.bo.seed_pooled); }},

      {"ga", "population_size",
       [](RunConfig& c, std::string_view v) { c.bo.ga.population_size = ParseNumber<int>(v); },
       [](const RunConfig& c) { return Fmt(c.bo.ga.population_size); }},
      {"ga", "offspring_size",
       [](RunConfig& c, std::string_view v) { c.bo.ga.offspring_size = ParseNumber<int>(v); },
       [](const RunConfig& c) { return Fmt(c.bo.ga.offspring_size); }},
      {"ga", "generations",
       [](RunConfig& c, std::string_view v) { c.bo.ga.generations = ParseNumber<int>(v); },
       [](const RunConfig& c) { return Fmt(c.bo.ga.generations); }},
      {"ga", "mutation_rate",
       [](RunConfig& c, std::string_view v) { c.bo.ga.mutation_rate = ParseNumber<double>(v); },
       [](const RunConfig& c) { return Fmt(c.bo.ga.mutation_rate); }},
      {"ga", "max_heavy_atoms",
       [](RunConfig& c, std::string_view v) { c.bo.ga.max_heavy_atoms = ParseNumber<int>(v); },
       [](const RunConfig& c) { return Fmt(c.bo.ga.max_heavy_atoms); }},
      {"ga", "num_threads",
       [](RunConfig& c, std::string_view v) { c.bo.ga.num_threads = ParseNumber<int>(v); },
       [](const RunConfig& c) { return Fmt(c.bo.ga.num_threads); }},

      {"bench", "objectives",
       [](RunConfig& c, std::string_view v) {
         c.bench_objectives = v == "all" ? std::vector<std::string>{} : SplitList(v, ',');
       },
       [](const RunConfig& c) {
         return c.bench_objectives.empty() ? std::string("all")
                                           : JoinStrings(c.bench_objectives, ",");
       }},
      {"bench", "seeds",
       [](RunConfig& c, std::string_view v) { c.bench_seeds = ParseSeedList(v); },
       [](const RunConfig& c) { return JoinSeeds(c.bench_seeds); }},
      {"bench", "threads",
       [](RunConfig& c, std::string_view v) { c.bench_threads = ParseNumber<int>(v); },
       [](const RunConfig& c) { return Fmt(c.bench_threads); }},
  };
  return fields;
}

}  // namespace

void RunConfig::Validate() const {
  if (output_dir.empty()) throw InputError("run.output_dir must not be empty");
  objective.Validate();
  bo.Validate();
  for (const auto& name : bench_objectives) objectives::BuiltinObjective(name);
  if (bench_seeds.empty()) throw InputError("bench.seeds must not be empty");
  if (bench_threads < 1) throw InputError("bench.threads must be >= 1");
}

RunConfig ParseConfig(std::istream& in, std::string_view source) {
  RunConfig cfg;
  std::string section;
  std::string line;
  int line_no = 0;
  std::set<std::pair<std::string, std::string>> seen;
  bool custom_objective = false;
  std::string objective_name;

  auto fail = [&](const std::string& msg) {
    throw InputError(fmt::format("{}:{}: {}", source, line_no, msg));
  };

  while (std::getline(in, line)) {
    ++line_no;
    auto text = Trim(line);
    if (text.empty() || text.front() == '#' || text.front() == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']') fail("unterminated section header");
      section = Trim(text.substr(1, text.size() - 2));
      const bool known = std::any_of(Fields().begin(), Fields().end(),
                                     [&](const Field& f) { return f.section == section; });
      if (!known) fail(fmt::format("unknown section '{}'", section));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value'");
    const auto key = Trim(text.substr(0, eq));
    const auto value = Trim(text.substr(eq + 1));
    if (section.empty()) fail(fmt::format("key '{}' outside a section", key));
    const auto it = std::find_if(Fields().begin(), Fields().end(), [&](const Field& f) {
      return f.section == section && f.key == key;
    });
    if (it == Fields().end()) fail(fmt::format("unknown key '{}.{}'", section, key));
    if (!seen.emplace(section, std::string(key)).second) {
      fail(fmt::format("duplicate key '{}.{}'", section, key));
    }
    if (section == "objective") {
      if (key == "name") {
        objective_name = value;
        continue;
      }
      custom_objective = true;
    }
    try {
      it->set(cfg, value);
    } catch (const InputError& e) {
      fail(fmt::format("{}.{}: {}", section, key, e.what()));
    }
  }

  if (!custom_objective) {
    if (!objective_name.empty()) {
      try {
        cfg.objective = objectives::BuiltinObjective(objective_name);
      } catch (const InputError& e) {
        throw InputError(fmt::format("{}: {}", source, e.what()));
      }
    }
  } else {
    if (objective_name.empty()) {
      throw InputError(fmt::format("{}: a custom objective needs objective.name", source));
    }
    cfg.objective.name = objective_name;
  }
  cfg.bo.rng_seed = cfg.seed;
  try {
    cfg.Validate();
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", source, e.what()));
  }
  return cfg;
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open config file '{}'", path.string()));
  return ParseConfig(in, path.string());
}

std::string FormatConfig(const RunConfig& cfg) {
  std::ostringstream out;
  std::string_view section;
  for (const auto& f : Fields()) {
    if (f.section != section) {
      if (!section.empty()) out << '\n';
      section = f.section;
      out << '[' << section << "]\n";
    }
    out << f.key << " = " << f.get(cfg) << '\n';
  }
  return out.str();
}

std::vector<std::uint64_t> ParseSeedList(std::string_view text) {
  text = Trim(text);
  std::vector<std::uint64_t> seeds;
  const auto dots = text.find("..");
  if (dots != std::string_view::npos) {
    const auto lo = ParseNumber<std::uint64_t>(Trim(text.substr(0, dots)));
    const auto hi = ParseNumber<std::uint64_t>(Trim(text.substr(dots + 2)));
    if (hi < lo) throw InputError(fmt::format("empty seed range '{}'", text));
    if (hi - lo >= 100000) throw InputError(fmt::format("seed range '{}' too large", text));
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  } else {
    for (const auto& item : SplitList(text, ',')) {
      seeds.push_back(ParseNumber<std::uint64_t>(item));
    }
  }
  if (seeds.empty()) throw InputError("empty seed list");
  return seeds;
}

std::filesystem::path DefaultSeedsFile() {
  return std::filesystem::path(MOLBO_DATA_DIR) / "seeds.smi";
}

std::filesystem::path ResolveOutputDir(const std::filesystem::path& dir) {
  const char* root = std::getenv(kOutputRootEnv);
  if (root && *root && dir.is_relative()) return std::filesystem::path(root) / dir;
  return dir;
}

}  // namespace molbo::config
