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

#ifndef OMNIVI_HARNESS_H_
#define OMNIVI_HARNESS_H_

// Config-driven experiment runner: builds the game, runs a learner for K
// episodes, evaluates every episode with the exact oracles and emits
// metrics.csv plus summary.json.
//
// A run's randomness comes from one seed split into named substreams
// (environment, learner, opponent, generator, audit), so the CSV is a pure
// function of (config, seed).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "omnivi/evaluation.h"
#include "omnivi/game_model.h"
#include "omnivi/learners.h"
#include "omnivi/matrix_equilibria.h"

namespace omnivi {

enum class Mode {
  kOffline,
  kOnline,
  kTurnOffline,
  kTurnOnline,
  kDemoInstability,
  kValidate,
};

std::string ToString(Mode mode);
// Throws kConfig on unknown names.
Mode ParseMode(const std::string& name);

struct RandomSimplexSource {
  int dim = 4;
  int num_states = 3;
  int num_actions = 2;
  int horizon = 2;
  // Generator seed; the run seed's generator substream when absent, so a
  // sweep over seeds then also varies the game.
  std::optional<std::uint64_t> seed;
};

struct ExperimentConfig {
  Mode mode = Mode::kOffline;
  std::string game_path;  // absolute, or relative to the working directory
  std::optional<RandomSimplexSource> random_simplex;
  int episodes = 100;  // K
  double c = 1.0;
  double p = 0.05;
  std::uint64_t seed = 0;
  OpponentKind opponent = OpponentKind::kUniform;
  std::optional<MarkovPolicy> opponent_policy;  // for fixed_markov
  std::string out = "out";
  std::vector<int> checkpoints;
  std::vector<std::uint64_t> seeds;  // sweep cells
  bool audit = true;                 // regression audit after every episode
  double eps = 0.1;                  // demo_instability
};

// Unknown keys and ill-typed values throw kConfig. A relative "game" path is
// resolved against `base_dir`.
ExperimentConfig ParseConfig(const std::string& text,
                             const std::string& base_dir,
                             const std::string& origin);
ExperimentConfig LoadConfig(const std::string& path);
// K >= 1, c > 0, 0 < p < 1, a game source compatible with the mode.
void ValidateConfig(const ExperimentConfig& config);
std::string ConfigToJson(const ExperimentConfig& config);

// Inline checks accumulated over a run. Fractions are over all K episodes.
struct RunDiagnostics {
  int episodes = 0;
  // Offline modes.
  int sandwich_hits = 0;   // LCB - 2(H+1)eps <= V^{pi,*}, V^{*,nu} <= UCB + 2(H+1)eps
  int gap_bound_hits = 0;  // gap_k <= (UCB - LCB) + 8/K
  // Online modes.
  int ucb_hits = 0;  // V_1^k >= V_1^* (1e-9 slack)
  // Largest |gap - (exploit1 + exploit2)|.
  double max_identity_error = 0.0;
  // Regression audit; all "excess" entries should stay <= 0 up to roundoff.
  int audits = 0;
  double max_simple_bound_excess = 0.0;  // sum phi^T Lambda^{-1} phi - d
  double max_potential_excess = 0.0;     // two-sided elliptical potential
  double max_coefficient_ratio = 0.0;    // ||w|| / (2 H sqrt(d k))
  double max_gram_error = 0.0;
  std::vector<int> inverse_checkpoints;  // episodes audited against inv(Lambda)
  double max_inverse_error = 0.0;

  double Fraction(int hits) const {
    return episodes == 0 ? 0.0 : static_cast<double>(hits) / episodes;
  }
};

struct RunOutput {
  ExperimentConfig config;
  int dim = 0;
  int horizon = 0;
  double beta = 0.0;
  double eps_net = 0.0;  // offline modes
  MetricsSeries metrics;
  std::vector<EpisodeRecord> records;
  RunDiagnostics diagnostics;
  // argmin_k (UCB - LCB), lowest k on ties; offline modes only.
  std::optional<int> k0;
  std::optional<double> k0_width;
  double wall_seconds = 0.0;

  bool offline() const {
    return config.mode == Mode::kOffline || config.mode == Mode::kTurnOffline;
  }
  std::optional<double> TotalGap() const;
  std::optional<double> TotalRegret() const;
  // Cumulative gap (offline) or regret (online) after episode k.
  std::optional<double> CumulativeAt(int k) const;
};

// Runs one of the four learner modes. Model-validity problems throw
// kModelValidity before any episode is played.
RunOutput Run(const ExperimentConfig& config);

// Loads or generates the game named by the config.
GameSpec BuildGame(const ExperimentConfig& config);
TurnSpec BuildTurnGame(const ExperimentConfig& config);

// %.17g; "NA" for missing values.
std::string FormatDouble(double value);
std::string FormatDouble(const std::optional<double>& value);

std::string CsvHeader(Mode mode);
std::string FormatCsv(const RunOutput& output);
std::string FormatSummary(const RunOutput& output);
// Creates `dir` and writes metrics.csv and summary.json; kIo on failure.
void Emit(const RunOutput& output, const std::string& dir);

struct InstabilityReport {
  double eps = 0.0;
  InstabilityPair games;
  JointDistribution sigma;            // CCE of the original game
  JointDistribution sigma_perturbed;  // CCE of the perturbed game
  double value1 = 0.0, value2 = 0.0;                      // original
  double perturbed_value1 = 0.0, perturbed_value2 = 0.0;  // perturbed
  double distance = 0.0;   // max entry difference over both payoffs
  double value_gap = 0.0;  // max over players of the value difference
  CceCheck transfer;          // sigma checked on the perturbed game, tol eps
  CceCheck reverse_transfer;  // sigma_perturbed on the original game, tol eps
};

InstabilityReport DemoInstability(double eps);
std::string FormatInstabilityText(const InstabilityReport& report);
std::string FormatInstabilityCsv(const InstabilityReport& report);

// OMNIVI_THREADS if set and positive, else the hardware concurrency.
int SweepThreads();
// One Run per seed, in parallel, each writing to <config.out>/seed_<seed>.
std::vector<RunOutput> Sweep(const ExperimentConfig& base,
                             const std::vector<std::uint64_t>& seeds,
                             int threads);
std::string FormatSweepCsv(const std::vector<RunOutput>& outputs);

}  // namespace omnivi

#endif  // OMNIVI_HARNESS_H_
