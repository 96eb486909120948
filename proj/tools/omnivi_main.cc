// Copyright 2026 The omnivi Authors.
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

// omnivi command-line tool.
//
//   omnivi run --config cfg.json [--seed N] [--out DIR] [--mode M] [--K K]
//              [--c C] [--p P] [--opponent KIND]
//   omnivi sweep --config cfg.json [--seeds 1,2,3] [--out DIR] ...
//   omnivi demo-instability [--eps E] [--out DIR]
//   omnivi validate --game game.json
//
// Exit codes: 0 ok, 2 config or input, 3 model validity, 4 IO,
// 5 numeric, solver or internal failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "omnivi/errors.h"
#include "omnivi/harness.h"
#include "omnivi/spec_io.h"

namespace {

using omnivi::ErrorKind;
using omnivi::ExperimentConfig;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> mode;
  std::optional<int> episodes;
  std::optional<double> c;
  std::optional<double> p;
  std::optional<std::string> opponent;
};

void AddRunFlags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "experiment config (JSON)")->required();
  cmd->add_option("--seed", o.seed, "run seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--mode", o.mode,
                  "offline | online | turn_offline | turn_online");
  cmd->add_option("--K", o.episodes, "number of episodes");
  cmd->add_option("--c", o.c, "bonus constant");
  cmd->add_option("--p", o.p, "confidence parameter");
  cmd->add_option("--opponent", o.opponent,
                  "uniform | fixed_markov | best_response");
}

ExperimentConfig Resolve(const Overrides& o) {
  ExperimentConfig config = omnivi::LoadConfig(o.config);
  if (o.seed) config.seed = *o.seed;
  if (o.out) config.out = *o.out;
  if (o.mode) config.mode = omnivi::ParseMode(*o.mode);
  if (o.episodes) {
    // Checkpoints past an overridden K no longer exist.
    config.episodes = *o.episodes;
    std::erase_if(config.checkpoints,
                  [&](int k) { return k > config.episodes; });
  }
  if (o.c) config.c = *o.c;
  if (o.p) config.p = *o.p;
  if (o.opponent) config.opponent = omnivi::ParseOpponentKind(*o.opponent);
  omnivi::ValidateConfig(config);
  return config;
}

void PrintRunLine(const omnivi::RunOutput& r, std::ostream& os) {
  os << omnivi::ToString(r.config.mode) << " seed=" << r.config.seed
     << " K=" << r.diagnostics.episodes;
  if (r.offline()) {
    os << " total_gap=" << omnivi::FormatDouble(r.TotalGap())
       << " k0=" << (r.k0 ? std::to_string(*r.k0) : "NA");
  } else {
    os << " total_regret=" << omnivi::FormatDouble(r.TotalRegret());
  }
  os << " out=" << r.config.out << "\n";
}

int CmdRun(const Overrides& o) {
  const ExperimentConfig config = Resolve(o);
  const omnivi::RunOutput output = omnivi::Run(config);
  omnivi::Emit(output, config.out);
  PrintRunLine(output, std::cout);
  return 0;
}

int CmdSweep(const Overrides& o, const std::vector<std::uint64_t>& seeds_flag) {
  const ExperimentConfig config = Resolve(o);
  std::vector<std::uint64_t> seeds = seeds_flag;
  if (seeds.empty()) seeds = config.seeds;
  if (seeds.empty()) seeds = {config.seed};
  const std::vector<omnivi::RunOutput> outputs =
      omnivi::Sweep(config, seeds, omnivi::SweepThreads());
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) omnivi::Fail(ErrorKind::kIo, "cannot create '" + config.out + "'");
  omnivi::WriteTextFile(
      (std::filesystem::path(config.out) / "sweep.csv").string(),
      omnivi::FormatSweepCsv(outputs));
  for (const omnivi::RunOutput& r : outputs) PrintRunLine(r, std::cout);
  return 0;
}

int CmdDemo(double eps, const std::optional<std::string>& out) {
  const omnivi::InstabilityReport report = omnivi::DemoInstability(eps);
  std::cout << omnivi::FormatInstabilityText(report);
  if (out) {
    std::error_code ec;
    std::filesystem::create_directories(*out, ec);
    if (ec) omnivi::Fail(ErrorKind::kIo, "cannot create '" + *out + "'");
    omnivi::WriteTextFile(
        (std::filesystem::path(*out) / "instability.csv").string(),
        omnivi::FormatInstabilityCsv(report));
  }
  return 0;
}

int CmdValidate(const std::string& path) {
  const omnivi::GameFile file = omnivi::LoadGameFile(path);
  const omnivi::ValidationReport report =
      file.is_turn() ? omnivi::Validate(*file.turn)
                     : omnivi::Validate(*file.game);
  if (report.ok()) {
    std::cout << path << ": ok\n";
    return 0;
  }
  std::cout << report.Describe();
  return omnivi::ExitCodeFor(ErrorKind::kModelValidity);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"omnivi: optimistic minimax value iteration experiments"};
  app.require_subcommand(1);

  Overrides run_flags;
  CLI::App* run = app.add_subcommand("run", "run one experiment");
  AddRunFlags(run, run_flags);

  Overrides sweep_flags;
  std::vector<std::uint64_t> seeds;
  CLI::App* sweep = app.add_subcommand("sweep", "run one experiment per seed");
  AddRunFlags(sweep, sweep_flags);
  sweep->add_option("--seeds", seeds, "seeds (comma separated)")
      ->delimiter(',');

  double eps = 0.1;
  std::optional<std::string> demo_out;
  CLI::App* demo = app.add_subcommand(
      "demo-instability", "CCE instability under small payoff perturbations");
  demo->add_option("--eps", eps, "perturbation size (> 0)");
  demo->add_option("--out", demo_out, "directory for instability.csv");

  std::string game_path;
  CLI::App* validate = app.add_subcommand("validate", "check a game file");
  validate->add_option("--game", game_path, "game file (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : omnivi::ExitCodeFor(ErrorKind::kConfig);
  }

  try {
    if (*run) return CmdRun(run_flags);
    if (*sweep) return CmdSweep(sweep_flags, seeds);
    if (*demo) {
      if (!(eps > 0.0)) omnivi::Fail(ErrorKind::kConfig, "--eps must be positive");
      return CmdDemo(eps, demo_out);
    }
    if (*validate) return CmdValidate(game_path);
  } catch (const omnivi::Error& e) {
    std::cerr << "omnivi: " << e.what() << "\n";
    return omnivi::ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "omnivi: internal error: " << e.what() << "\n";
    return omnivi::ExitCodeFor(ErrorKind::kInternalState);
  }
  return 0;
}
