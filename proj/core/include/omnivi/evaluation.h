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

#ifndef OMNIVI_EVALUATION_H_
#define OMNIVI_EVALUATION_H_

// Exact dynamic-programming oracles on the true model and the per-episode
// metrics built from them. Everything here is an exact expectation over the
// finite state and action sets.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "omnivi/game_model.h"
#include "omnivi/learners.h"
#include "omnivi/rng.h"

namespace omnivi {

// Rewards and next-state distributions tabulated once from a GameSpec.
class ExactModel {
 public:
  explicit ExactModel(const GameSpec& spec);

  const GameSpec& spec() const { return *spec_; }
  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  double Reward(int h, int x, int a, int b) const {
    return reward_[Index(h, x, a, b)];
  }
  // Pointer to |S| probabilities.
  const double* Next(int h, int x, int a, int b) const {
    return &next_[Index(h, x, a, b) * num_states_];
  }

 private:
  std::size_t Index(int h, int x, int a, int b) const {
    return ((static_cast<std::size_t>(h) * num_states_ + x) * num_actions_ +
            a) * num_actions_ + b;
  }

  const GameSpec* spec_;
  int horizon_;
  int num_states_;
  int num_actions_;
  std::vector<double> reward_;
  std::vector<double> next_;
};

// V_h(x) for h in [0, H] (V_H = 0) and Q_h(x, a, b) for h in [0, H).
class ValueTable {
 public:
  ValueTable(int horizon, int num_states, int num_actions);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  double V(int h, int x) const { return v_[h * num_states_ + x]; }
  double& V(int h, int x) { return v_[h * num_states_ + x]; }
  double Q(int h, int x, int a, int b) const { return q_[QIndex(h, x, a, b)]; }
  double& Q(int h, int x, int a, int b) { return q_[QIndex(h, x, a, b)]; }
  Matrix QMatrix(int h, int x) const;

 private:
  std::size_t QIndex(int h, int x, int a, int b) const {
    return ((static_cast<std::size_t>(h) * num_states_ + x) * num_actions_ +
            a) * num_actions_ + b;
  }

  int horizon_;
  int num_states_;
  int num_actions_;
  std::vector<double> v_;
  std::vector<double> q_;
};

enum class MinimaxOrder { kMaxMin, kMinMax };

// V* and Q* by backward induction with a zero-sum solve per state. kMinMax
// solves each stage game from the column player's side instead.
ValueTable ExactNash(const ExactModel& model,
                     MinimaxOrder order = MinimaxOrder::kMaxMin);

// Which player's policy is held fixed.
enum class FixedSide { kRow = 1, kColumn = 2 };

// kRow: V^{pi,*} (the column player best-responds, minimizing).
// kColumn: V^{*,nu} (the row player best-responds, maximizing).
ValueTable BestResponseValues(const ExactModel& model,
                              const MarkovPolicy& policy, FixedSide fixed);

// A pure best response to `policy`, lowest action index on ties.
MarkovPolicy BestResponsePolicy(const ExactModel& model,
                                const MarkovPolicy& policy, FixedSide fixed);

// V^{pi,nu} and Q^{pi,nu}.
ValueTable PolicyValue(const ExactModel& model, const MarkovPolicy& pi,
                       const MarkovPolicy& nu);

// theta_h + sum_x' V_{h+1}(x') mu_h(:, x'): the weight vector w_h with
// Q_h = <phi, w_h> for any policy pair whose values are in `values`.
Vector LinearWeights(const GameSpec& spec, const ValueTable& values, int h);

// Throws kInput unless `policy` has a distribution for every (h, x).
void CheckPolicy(const ExactModel& model, const MarkovPolicy& policy);

MarkovPolicy UniformPolicy(int horizon, int num_states, int num_actions);

// One episode's oracle quantities at its initial state.
struct EpisodeMetrics {
  int k = 0;
  int initial_state = 0;
  double ucb = 0.0;              // V-bar_1 (offline) or V_1 (online)
  std::optional<double> lcb;     // offline only
  double nash_value = 0.0;       // V*_1
  double pi_star = 0.0;          // V^{pi,*}_1
  std::optional<double> star_nu; // V^{*,nu}_1, when nu is known
  std::optional<double> pi_nu;   // V^{pi,nu}_1, when nu is known
  std::optional<double> gap;     // star_nu - pi_star
  std::optional<double> exploit1;
  std::optional<double> exploit2;
  std::optional<double> regret;  // nash_value - pi_nu
};

EpisodeMetrics EvaluateOffline(const ExactModel& model, const ValueTable& nash,
                               const EpisodeRecord& record,
                               const MarkovPolicy& pi, const MarkovPolicy& nu);

// `nu` is empty for opponents without a known Markov policy.
EpisodeMetrics EvaluateOnline(const ExactModel& model, const ValueTable& nash,
                              const EpisodeRecord& record,
                              const MarkovPolicy& pi,
                              const std::optional<MarkovPolicy>& nu);

// Per-episode metrics with running sums. A cumulative entry becomes
// unavailable from the first episode whose term is unavailable.
class MetricsSeries {
 public:
  void Append(EpisodeMetrics metrics);

  const std::vector<EpisodeMetrics>& episodes() const { return episodes_; }
  const std::vector<std::optional<double>>& cum_gap() const { return cum_gap_; }
  const std::vector<std::optional<double>>& cum_regret() const {
    return cum_regret_;
  }
  std::size_t size() const { return episodes_.size(); }

 private:
  std::vector<EpisodeMetrics> episodes_;
  std::vector<std::optional<double>> cum_gap_;
  std::vector<std::optional<double>> cum_regret_;
};

// Opponents.

enum class OpponentKind { kUniform, kFixedMarkov, kBestResponse };

std::string ToString(OpponentKind kind);
// Accepts "uniform", "fixed_markov", "best_response" (alias
// "best_response_oracle"); throws kConfig otherwise.
OpponentKind ParseOpponentKind(const std::string& name);

class UniformOpponent : public Opponent {
 public:
  UniformOpponent(int horizon, int num_states, int num_actions, Rng rng);
  int Act(const OpponentContext& context) override;
  std::optional<MarkovPolicy> CurrentPolicy() const override {
    return policy_;
  }

 private:
  MarkovPolicy policy_;
  int num_actions_;
  Rng rng_;
};

class FixedMarkovOpponent : public Opponent {
 public:
  FixedMarkovOpponent(MarkovPolicy policy, Rng rng);
  int Act(const OpponentContext& context) override;
  std::optional<MarkovPolicy> CurrentPolicy() const override {
    return policy_;
  }

 private:
  MarkovPolicy policy_;
  Rng rng_;
};

// Plays a pure minimizing best response to the learner's current policy.
class BestResponseOpponent : public Opponent {
 public:
  explicit BestResponseOpponent(const ExactModel& model) : model_(&model) {}
  bool WantsLearnerPolicy() const override { return true; }
  void BeginEpisode(int k, const MarkovPolicy& learner_policy) override;
  int Act(const OpponentContext& context) override;
  std::optional<MarkovPolicy> CurrentPolicy() const override {
    return policy_;
  }

 private:
  const ExactModel* model_;
  std::optional<MarkovPolicy> policy_;
};

// `fixed_policy` is required for kFixedMarkov and ignored otherwise.
std::unique_ptr<Opponent> MakeOpponent(
    OpponentKind kind, const ExactModel& model, Rng rng,
    std::optional<MarkovPolicy> fixed_policy = std::nullopt);

}  // namespace omnivi

#endif  // OMNIVI_EVALUATION_H_
