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

#include "omnivi/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "omnivi/errors.h"
#include "omnivi/regression.h"
#include "omnivi/spec_io.h"

#ifndef OMNIVI_VERSION
#define OMNIVI_VERSION "unknown"
#endif

namespace omnivi {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kRoundoff = 1e-9;
constexpr int kInverseCheckpoints = 10;

[[noreturn]] void BadConfig(const std::string& origin, const std::string& what) {
  Fail(ErrorKind::kConfig, origin + ": " + what);
}

int ConfigInt(const json& v, const std::string& key, const std::string& origin) {
  if (!v.is_number_integer()) BadConfig(origin, "'" + key + "' must be an integer");
  return v.get<int>();
}

double ConfigNumber(const json& v, const std::string& key,
                    const std::string& origin) {
  if (!v.is_number()) BadConfig(origin, "'" + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t ConfigSeed(const json& v, const std::string& key,
                         const std::string& origin) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    BadConfig(origin, "'" + key + "' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string ConfigString(const json& v, const std::string& key,
                         const std::string& origin) {
  if (!v.is_string()) BadConfig(origin, "'" + key + "' must be a string");
  return v.get<std::string>();
}

MarkovPolicy ParsePolicy(const json& v, const std::string& origin) {
  MarkovPolicy policy;
  if (!v.is_array()) BadConfig(origin, "'opponent_policy' must be [h][x][a]");
  for (const json& step : v) {
    if (!step.is_array()) BadConfig(origin, "'opponent_policy' must be [h][x][a]");
    std::vector<MixedStrategy> row;
    for (const json& dist : step) {
      if (!dist.is_array()) BadConfig(origin, "'opponent_policy' must be [h][x][a]");
      MixedStrategy s(static_cast<Eigen::Index>(dist.size()));
      for (std::size_t i = 0; i < dist.size(); ++i)
        s(static_cast<Eigen::Index>(i)) =
            ConfigNumber(dist[i], "opponent_policy", origin);
      row.push_back(std::move(s));
    }
    policy.push_back(std::move(row));
  }
  return policy;
}

void RequireValid(const ValidationReport& report) {
  if (!report.ok()) Fail(ErrorKind::kModelValidity, report.Describe());
}

// Regression audit over every step's GramState.
class Auditor {
 public:
  Auditor(const ExperimentConfig& config, RunDiagnostics& diag)
      : enabled_(config.audit), diag_(&diag) {
    Rng rng = StreamFor(config.seed, Stream::kAudit);
    std::vector<int> ks(config.episodes);
    std::iota(ks.begin(), ks.end(), 1);
    const int picks = std::min(kInverseCheckpoints, config.episodes);
    for (int i = 0; i < picks; ++i) {
      const int j = i + rng.Below(config.episodes - i);
      std::swap(ks[i], ks[j]);
    }
    ks.resize(picks);
    std::sort(ks.begin(), ks.end());
    diag.inverse_checkpoints = ks;
  }

  void After(int k, const std::vector<GramState>& grams) {
    const bool checkpoint =
        std::binary_search(diag_->inverse_checkpoints.begin(),
                           diag_->inverse_checkpoints.end(), k);
    if (!enabled_ && !checkpoint) return;
    for (const GramState& gram : grams) {
      const RegressionAudit audit = AuditGram(gram, checkpoint);
      ++diag_->audits;
      diag_->max_simple_bound_excess =
          std::max(diag_->max_simple_bound_excess,
                   audit.simple_bound_sum - audit.dim);
      diag_->max_potential_excess = std::max(
          {diag_->max_potential_excess,
           audit.potential_sum - 2.0 * audit.log_det_ratio,
           audit.log_det_ratio - audit.potential_sum});
      diag_->max_gram_error = std::max(diag_->max_gram_error, audit.gram_error);
      if (checkpoint)
        diag_->max_inverse_error =
            std::max(diag_->max_inverse_error, audit.inverse_error);
    }
  }

 private:
  bool enabled_;
  RunDiagnostics* diag_;
};

void ScoreOffline(const EpisodeMetrics& m, int horizon, double eps_net,
                  int episodes, RunOutput& out) {
  RunDiagnostics& d = out.diagnostics;
  const double slack = 2.0 * (horizon + 1) * eps_net;
  const double width = m.ucb - *m.lcb;
  if (*m.lcb - slack <= m.pi_star + kRoundoff &&
      *m.star_nu <= m.ucb + slack + kRoundoff)
    ++d.sandwich_hits;
  if (*m.gap <= width + 8.0 / episodes + kRoundoff) ++d.gap_bound_hits;
  d.max_identity_error = std::max(
      d.max_identity_error, std::abs(*m.gap - (*m.exploit1 + *m.exploit2)));
  if (!out.k0_width || width < *out.k0_width) {
    out.k0 = m.k;
    out.k0_width = width;
  }
}

void ScoreOnline(const EpisodeMetrics& m, RunOutput& out) {
  RunDiagnostics& d = out.diagnostics;
  if (m.ucb >= m.nash_value - kRoundoff) ++d.ucb_hits;
  if (m.gap)
    d.max_identity_error = std::max(
        d.max_identity_error, std::abs(*m.gap - (*m.exploit1 + *m.exploit2)));
}

void Record(EpisodeMetrics m, EpisodeRecord record, RunOutput& out) {
  RunDiagnostics& d = out.diagnostics;
  ++d.episodes;
  d.max_coefficient_ratio =
      std::max(d.max_coefficient_ratio, record.coefficient_ratio);
  out.metrics.Append(std::move(m));
  out.records.push_back(std::move(record));
}

LearnerConfig LearnerConfigFor(const ExperimentConfig& config) {
  return {config.episodes, config.c, config.p};
}

void RunOfflineMode(const ExperimentConfig& config, RunOutput& out) {
  const GameSpec spec = BuildGame(config);
  RequireValid(Validate(spec));
  const ExactModel model(spec);
  const ValueTable nash = ExactNash(model);
  Environment env(spec, StreamFor(config.seed, Stream::kEnvironment));
  Rng learner_rng = StreamFor(config.seed, Stream::kLearner);
  OfflineLearner learner(spec, LearnerConfigFor(config));
  out.dim = spec.dim();
  out.horizon = spec.horizon();
  out.beta = learner.beta();
  out.eps_net = learner.eps_net();
  Auditor auditor(config, out.diagnostics);
  for (int k = 1; k <= config.episodes; ++k) {
    auto [pi, nu] = learner.Plan().MarginalPolicies();
    EpisodeRecord record = learner.RunEpisode(env, learner_rng);
    EpisodeMetrics m = EvaluateOffline(model, nash, record, pi, nu);
    ScoreOffline(m, spec.horizon(), out.eps_net, config.episodes, out);
    auditor.After(k, learner.grams());
    Record(std::move(m), std::move(record), out);
  }
}

void RunTurnOfflineMode(const ExperimentConfig& config, RunOutput& out) {
  const TurnSpec turn = BuildTurnGame(config);
  RequireValid(Validate(turn));
  const GameSpec spec = EmbedTurnBased(turn);
  const ExactModel model(spec);
  const ValueTable nash = ExactNash(model);
  Environment env(spec, StreamFor(config.seed, Stream::kEnvironment));
  TurnOfflineLearner learner(turn, LearnerConfigFor(config));
  out.dim = turn.dim;
  out.horizon = turn.horizon;
  out.beta = learner.beta();
  out.eps_net = learner.eps_net();
  Auditor auditor(config, out.diagnostics);
  for (int k = 1; k <= config.episodes; ++k) {
    auto [pi, nu] = learner.Plan().Policies();
    EpisodeRecord record = learner.RunEpisode(env);
    EpisodeMetrics m = EvaluateOffline(model, nash, record, pi, nu);
    ScoreOffline(m, turn.horizon, out.eps_net, config.episodes, out);
    auditor.After(k, learner.grams());
    Record(std::move(m), std::move(record), out);
  }
}

void RunOnlineMode(const ExperimentConfig& config, RunOutput& out) {
  const GameSpec spec = BuildGame(config);
  RequireValid(Validate(spec));
  const ExactModel model(spec);
  const ValueTable nash = ExactNash(model);
  Environment env(spec, StreamFor(config.seed, Stream::kEnvironment));
  Rng learner_rng = StreamFor(config.seed, Stream::kLearner);
  std::unique_ptr<Opponent> opponent =
      MakeOpponent(config.opponent, model,
                   StreamFor(config.seed, Stream::kOpponent),
                   config.opponent_policy);
  OnlineLearner learner(spec, LearnerConfigFor(config));
  out.dim = spec.dim();
  out.horizon = spec.horizon();
  out.beta = learner.beta();
  Auditor auditor(config, out.diagnostics);
  for (int k = 1; k <= config.episodes; ++k) {
    const MarkovPolicy pi = learner.Plan().Policy();
    EpisodeRecord record = learner.RunEpisode(env, *opponent, learner_rng);
    EpisodeMetrics m =
        EvaluateOnline(model, nash, record, pi, opponent->CurrentPolicy());
    ScoreOnline(m, out);
    auditor.After(k, learner.grams());
    Record(std::move(m), std::move(record), out);
  }
}

void RunTurnOnlineMode(const ExperimentConfig& config, RunOutput& out) {
  const TurnSpec turn = BuildTurnGame(config);
  RequireValid(Validate(turn));
  const GameSpec spec = EmbedTurnBased(turn);
  const ExactModel model(spec);
  const ValueTable nash = ExactNash(model);
  Environment env(spec, StreamFor(config.seed, Stream::kEnvironment));
  std::unique_ptr<Opponent> opponent =
      MakeOpponent(config.opponent, model,
                   StreamFor(config.seed, Stream::kOpponent),
                   config.opponent_policy);
  TurnOnlineLearner learner(turn, LearnerConfigFor(config));
  out.dim = turn.dim;
  out.horizon = turn.horizon;
  out.beta = learner.beta();
  Auditor auditor(config, out.diagnostics);
  for (int k = 1; k <= config.episodes; ++k) {
    const MarkovPolicy pi = learner.Plan().Policy();
    EpisodeRecord record = learner.RunEpisode(env, *opponent);
    EpisodeMetrics m =
        EvaluateOnline(model, nash, record, pi, opponent->CurrentPolicy());
    ScoreOnline(m, out);
    auditor.After(k, learner.grams());
    Record(std::move(m), std::move(record), out);
  }
}

ordered_json OptionalJson(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

std::string ToString(Mode mode) {
  switch (mode) {
    case Mode::kOffline:
      return "offline";
    case Mode::kOnline:
      return "online";
    case Mode::kTurnOffline:
      return "turn_offline";
    case Mode::kTurnOnline:
      return "turn_online";
    case Mode::kDemoInstability:
      return "demo_instability";
    case Mode::kValidate:
      return "validate";
  }
  return "unknown";
}

Mode ParseMode(const std::string& name) {
  for (Mode m : {Mode::kOffline, Mode::kOnline, Mode::kTurnOffline,
                 Mode::kTurnOnline, Mode::kDemoInstability, Mode::kValidate}) {
    if (ToString(m) == name) return m;
  }
  Fail(ErrorKind::kConfig, "unknown mode '" + name + "'");
}

ExperimentConfig ParseConfig(const std::string& text,
                             const std::string& base_dir,
                             const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    BadConfig(origin, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) BadConfig(origin, "top level must be an object");
  ExperimentConfig config;
  for (const auto& [key, v] : doc.items()) {
    if (key == "mode") {
      config.mode = ParseMode(ConfigString(v, key, origin));
    } else if (key == "game") {
      std::filesystem::path path(ConfigString(v, key, origin));
      if (path.is_relative() && !base_dir.empty())
        path = std::filesystem::path(base_dir) / path;
      config.game_path = path.lexically_normal().string();
    } else if (key == "random_simplex") {
      if (!v.is_object()) BadConfig(origin, "'random_simplex' must be an object");
      RandomSimplexSource src;
      for (const auto& [k2, v2] : v.items()) {
        if (k2 == "dim") src.dim = ConfigInt(v2, k2, origin);
        else if (k2 == "num_states") src.num_states = ConfigInt(v2, k2, origin);
        else if (k2 == "num_actions") src.num_actions = ConfigInt(v2, k2, origin);
        else if (k2 == "horizon") src.horizon = ConfigInt(v2, k2, origin);
        else if (k2 == "seed") src.seed = ConfigSeed(v2, k2, origin);
        else BadConfig(origin, "unknown key 'random_simplex." + k2 + "'");
      }
      config.random_simplex = src;
    } else if (key == "K") {
      config.episodes = ConfigInt(v, key, origin);
    } else if (key == "c") {
      config.c = ConfigNumber(v, key, origin);
    } else if (key == "p") {
      config.p = ConfigNumber(v, key, origin);
    } else if (key == "seed") {
      config.seed = ConfigSeed(v, key, origin);
    } else if (key == "opponent") {
      config.opponent = ParseOpponentKind(ConfigString(v, key, origin));
    } else if (key == "opponent_policy") {
      config.opponent_policy = ParsePolicy(v, origin);
    } else if (key == "out") {
      config.out = ConfigString(v, key, origin);
    } else if (key == "checkpoints") {
      if (!v.is_array()) BadConfig(origin, "'checkpoints' must be an array");
      for (const json& k : v) config.checkpoints.push_back(ConfigInt(k, key, origin));
    } else if (key == "seeds") {
      if (!v.is_array()) BadConfig(origin, "'seeds' must be an array");
      for (const json& s : v) config.seeds.push_back(ConfigSeed(s, key, origin));
    } else if (key == "audit") {
      if (!v.is_boolean()) BadConfig(origin, "'audit' must be a boolean");
      config.audit = v.get<bool>();
    } else if (key == "eps") {
      config.eps = ConfigNumber(v, key, origin);
    } else {
      BadConfig(origin, "unknown key '" + key + "'");
    }
  }
  return config;
}

ExperimentConfig LoadConfig(const std::string& path) {
  const std::string text = ReadTextFile(path);
  return ParseConfig(text,
                     std::filesystem::path(path).parent_path().string(), path);
}

void ValidateConfig(const ExperimentConfig& config) {
  auto bad = [](const std::string& what) { Fail(ErrorKind::kConfig, what); };
  if (config.mode == Mode::kDemoInstability) {
    if (!(config.eps > 0.0)) bad("eps must be positive");
    return;
  }
  if (config.mode == Mode::kValidate) {
    if (config.game_path.empty()) bad("validate needs a game file");
    return;
  }
  if (config.episodes < 1) bad("K must be at least 1");
  if (!(config.c > 0.0)) bad("c must be positive");
  if (!(config.p > 0.0 && config.p < 1.0)) bad("p must lie in (0, 1)");
  const bool has_file = !config.game_path.empty();
  if (has_file == config.random_simplex.has_value())
    bad("exactly one of 'game' and 'random_simplex' is required");
  const bool turn =
      config.mode == Mode::kTurnOffline || config.mode == Mode::kTurnOnline;
  if (turn && !has_file) bad("turn-based modes need a turn game file");
  if (const auto& r = config.random_simplex) {
    if (r->dim < 1 || r->num_states < 1 || r->num_actions < 1 || r->horizon < 1)
      bad("random_simplex sizes must be positive");
  }
  for (int k : config.checkpoints) {
    if (k < 1 || k > config.episodes) bad("checkpoint outside [1, K]");
  }
  if (config.opponent == OpponentKind::kFixedMarkov &&
      !config.opponent_policy && (config.mode == Mode::kOnline ||
                                  config.mode == Mode::kTurnOnline))
    bad("fixed_markov opponent needs 'opponent_policy'");
}

std::string ConfigToJson(const ExperimentConfig& config) {
  ordered_json doc;
  doc["mode"] = ToString(config.mode);
  if (!config.game_path.empty()) doc["game"] = config.game_path;
  if (const auto& r = config.random_simplex) {
    ordered_json src{{"dim", r->dim},
                     {"num_states", r->num_states},
                     {"num_actions", r->num_actions},
                     {"horizon", r->horizon}};
    if (r->seed) src["seed"] = *r->seed;
    doc["random_simplex"] = src;
  }
  doc["K"] = config.episodes;
  doc["c"] = config.c;
  doc["p"] = config.p;
  doc["seed"] = config.seed;
  doc["opponent"] = ToString(config.opponent);
  doc["out"] = config.out;
  doc["checkpoints"] = config.checkpoints;
  doc["audit"] = config.audit;
  if (config.mode == Mode::kDemoInstability) doc["eps"] = config.eps;
  return doc.dump(2);
}

GameSpec BuildGame(const ExperimentConfig& config) {
  if (const auto& r = config.random_simplex) {
    Rng rng = r->seed ? Rng::Substream(*r->seed,
                                       static_cast<std::uint64_t>(Stream::kGenerator))
                      : StreamFor(config.seed, Stream::kGenerator);
    return RandomSimplexGame(r->dim, r->num_states, r->num_actions, r->horizon,
                             rng);
  }
  return LoadGameFile(config.game_path).Simultaneous();
}

TurnSpec BuildTurnGame(const ExperimentConfig& config) {
  GameFile file = LoadGameFile(config.game_path);
  if (!file.is_turn())
    Fail(ErrorKind::kConfig, config.game_path + " is not a turn-based game");
  return *file.turn;
}

std::optional<double> RunOutput::TotalGap() const {
  return metrics.cum_gap().empty() ? std::nullopt : metrics.cum_gap().back();
}

std::optional<double> RunOutput::TotalRegret() const {
  return metrics.cum_regret().empty() ? std::nullopt
                                      : metrics.cum_regret().back();
}

std::optional<double> RunOutput::CumulativeAt(int k) const {
  if (k < 1 || k > static_cast<int>(metrics.size())) return std::nullopt;
  return offline() ? metrics.cum_gap()[k - 1] : metrics.cum_regret()[k - 1];
}

RunOutput Run(const ExperimentConfig& config) {
  ValidateConfig(config);
  RunOutput out;
  out.config = config;
  const auto start = std::chrono::steady_clock::now();
  switch (config.mode) {
    case Mode::kOffline:
      RunOfflineMode(config, out);
      break;
    case Mode::kOnline:
      RunOnlineMode(config, out);
      break;
    case Mode::kTurnOffline:
      RunTurnOfflineMode(config, out);
      break;
    case Mode::kTurnOnline:
      RunTurnOnlineMode(config, out);
      break;
    default:
      Fail(ErrorKind::kConfig, "mode '" + ToString(config.mode) +
                                   "' is not a learner run");
  }
  out.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return out;
}

std::string FormatDouble(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string FormatDouble(const std::optional<double>& value) {
  return value ? FormatDouble(*value) : std::string("NA");
}

std::string CsvHeader(Mode mode) {
  if (mode == Mode::kOffline || mode == Mode::kTurnOffline)
    return "k,ucb,lcb,gap,cum_gap,exploit1,exploit2";
  return "k,value_ucb,nash_value,regret,cum_regret";
}

std::string FormatCsv(const RunOutput& output) {
  std::string csv = CsvHeader(output.config.mode) + "\n";
  const auto& episodes = output.metrics.episodes();
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    const EpisodeMetrics& m = episodes[i];
    csv += std::to_string(m.k);
    if (output.offline()) {
      for (const std::optional<double>& v :
           {std::optional<double>(m.ucb), m.lcb, m.gap,
            output.metrics.cum_gap()[i], m.exploit1, m.exploit2}) {
        csv += "," + FormatDouble(v);
      }
    } else {
      for (const std::optional<double>& v :
           {std::optional<double>(m.ucb), std::optional<double>(m.nash_value),
            m.regret, output.metrics.cum_regret()[i]}) {
        csv += "," + FormatDouble(v);
      }
    }
    csv += "\n";
  }
  return csv;
}

std::string FormatSummary(const RunOutput& output) {
  const RunDiagnostics& d = output.diagnostics;
  ordered_json doc;
  doc["version"] = OMNIVI_VERSION;
  doc["mode"] = ToString(output.config.mode);
  doc["seed"] = output.config.seed;
  doc["episodes"] = d.episodes;
  doc["dim"] = output.dim;
  doc["horizon"] = output.horizon;
  doc["beta"] = output.beta;
  if (output.offline()) doc["eps_net"] = output.eps_net;
  doc["total_gap"] = OptionalJson(output.TotalGap());
  doc["total_regret"] = OptionalJson(output.TotalRegret());
  if (output.offline()) {
    doc["k0"] = output.k0 ? ordered_json(*output.k0) : ordered_json(nullptr);
    doc["k0_width"] = OptionalJson(output.k0_width);
  }
  ordered_json checkpoints = ordered_json::array();
  for (int k : output.config.checkpoints) {
    checkpoints.push_back(
        {{"k", k}, {output.offline() ? "cum_gap" : "cum_regret",
                    OptionalJson(output.CumulativeAt(k))}});
  }
  doc["checkpoints"] = checkpoints;
  ordered_json diag;
  if (output.offline()) {
    diag["sandwich_fraction"] = d.Fraction(d.sandwich_hits);
    diag["gap_bound_fraction"] = d.Fraction(d.gap_bound_hits);
  } else {
    diag["ucb_fraction"] = d.Fraction(d.ucb_hits);
  }
  diag["max_identity_error"] = d.max_identity_error;
  diag["audits"] = d.audits;
  diag["max_simple_bound_excess"] = d.max_simple_bound_excess;
  diag["max_potential_excess"] = d.max_potential_excess;
  diag["max_coefficient_ratio"] = d.max_coefficient_ratio;
  diag["max_gram_error"] = d.max_gram_error;
  diag["inverse_checkpoints"] = d.inverse_checkpoints;
  diag["max_inverse_error"] = d.max_inverse_error;
  doc["diagnostics"] = diag;
  doc["wall_seconds"] = output.wall_seconds;
  doc["config"] = ordered_json::parse(ConfigToJson(output.config));
  return doc.dump(2) + "\n";
}

void Emit(const RunOutput& output, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(ErrorKind::kIo, "cannot create '" + dir + "': " + ec.message());
  const std::filesystem::path base(dir);
  WriteTextFile((base / "metrics.csv").string(), FormatCsv(output));
  WriteTextFile((base / "summary.json").string(), FormatSummary(output));
}

InstabilityReport DemoInstability(double eps) {
  InstabilityReport r;
  r.eps = eps;
  r.games = MakeInstabilityPair(eps);
  const GamePair& g = r.games.original;
  const GamePair& q = r.games.perturbed;
  r.sigma = SolveCce(g.u1, g.u2);
  r.sigma_perturbed = SolveCce(q.u1, q.u2);
  r.value1 = r.sigma.Expect(g.u1);
  r.value2 = r.sigma.Expect(g.u2);
  r.perturbed_value1 = r.sigma_perturbed.Expect(q.u1);
  r.perturbed_value2 = r.sigma_perturbed.Expect(q.u2);
  r.distance = std::max((g.u1 - q.u1).cwiseAbs().maxCoeff(),
                        (g.u2 - q.u2).cwiseAbs().maxCoeff());
  r.value_gap = std::max(std::abs(r.value1 - r.perturbed_value1),
                         std::abs(r.value2 - r.perturbed_value2));
  r.transfer = VerifyCce(r.sigma, q.u1, q.u2, eps);
  r.reverse_transfer = VerifyCce(r.sigma_perturbed, g.u1, g.u2, eps);
  return r;
}

std::string FormatInstabilityText(const InstabilityReport& r) {
  std::ostringstream os;
  const Eigen::IOFormat fmt(Eigen::StreamPrecision, 0, ", ", "\n", "    [",
                            "]");
  auto game = [&](const char* name, const GamePair& g) {
    os << name << "\n  u1 (row player maximizes)\n"
       << g.u1.format(fmt) << "\n  u2 (column player minimizes)\n"
       << g.u2.format(fmt) << "\n";
  };
  os << "eps = " << FormatDouble(r.eps) << "\n";
  game("game u", r.games.original);
  game("game u'", r.games.perturbed);
  os << "CCE of u\n" << r.sigma.probs().format(fmt) << "\n";
  os << "CCE of u'\n" << r.sigma_perturbed.probs().format(fmt) << "\n";
  os << "values under u:  (" << FormatDouble(r.value1) << ", "
     << FormatDouble(r.value2) << ")\n";
  os << "values under u': (" << FormatDouble(r.perturbed_value1) << ", "
     << FormatDouble(r.perturbed_value2) << ")\n";
  os << "payoff distance  = " << FormatDouble(r.distance) << "\n";
  os << "value gap        = " << FormatDouble(r.value_gap) << "\n";
  os << "CCE of u as eps-CCE of u': "
     << (r.transfer.ok ? "pass" : "fail") << " (max violation "
     << FormatDouble(r.transfer.max_violation) << ")\n";
  os << "CCE of u' as eps-CCE of u: "
     << (r.reverse_transfer.ok ? "pass" : "fail") << " (max violation "
     << FormatDouble(r.reverse_transfer.max_violation) << ")\n";
  return os.str();
}

std::string FormatInstabilityCsv(const InstabilityReport& r) {
  std::string csv =
      "eps,distance,value1,value2,perturbed_value1,perturbed_value2,value_gap,"
      "transfer_violation,transfer_ok,reverse_violation,reverse_ok\n";
  for (double v : {r.eps, r.distance, r.value1, r.value2, r.perturbed_value1,
                   r.perturbed_value2, r.value_gap,
                   r.transfer.max_violation}) {
    csv += FormatDouble(v) + ",";
  }
  csv += std::string(r.transfer.ok ? "1" : "0") + "," +
         FormatDouble(r.reverse_transfer.max_violation) + "," +
         (r.reverse_transfer.ok ? "1" : "0") + "\n";
  return csv;
}

int SweepThreads() {
  if (const char* env = std::getenv("OMNIVI_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0)
      return static_cast<int>(std::min<long>(n, 1024));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RunOutput> Sweep(const ExperimentConfig& base,
                             const std::vector<std::uint64_t>& seeds,
                             int threads) {
  Require(!seeds.empty(), ErrorKind::kConfig, "sweep needs at least one seed");
  ValidateConfig(base);
  std::vector<RunOutput> outputs(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        ExperimentConfig cell = base;
        cell.seed = seeds[i];
        cell.out = (std::filesystem::path(base.out) /
                    ("seed_" + std::to_string(seeds[i])))
                       .string();
        outputs[i] = Run(cell);
        Emit(outputs[i], cell.out);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::clamp<int>(threads, 1, static_cast<int>(seeds.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return outputs;
}

std::string FormatSweepCsv(const std::vector<RunOutput>& outputs) {
  std::string csv =
      "seed,episodes,total_gap,total_regret,k0,k0_width,sandwich_fraction,"
      "gap_bound_fraction,ucb_fraction\n";
  for (const RunOutput& o : outputs) {
    const RunDiagnostics& d = o.diagnostics;
    const bool off = o.offline();
    csv += std::to_string(o.config.seed) + "," + std::to_string(d.episodes) +
           "," + FormatDouble(o.TotalGap()) + "," +
           FormatDouble(o.TotalRegret()) + "," +
           (o.k0 ? std::to_string(*o.k0) : std::string("NA")) + "," +
           FormatDouble(o.k0_width) + "," +
           (off ? FormatDouble(d.Fraction(d.sandwich_hits)) : "NA") + "," +
           (off ? FormatDouble(d.Fraction(d.gap_bound_hits)) : "NA") + "," +
           (off ? "NA" : FormatDouble(d.Fraction(d.ucb_hits))) + "\n";
  }
  return csv;
}

}  // namespace omnivi
