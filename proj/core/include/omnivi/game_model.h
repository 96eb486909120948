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

#ifndef OMNIVI_GAME_MODEL_H_
#define OMNIVI_GAME_MODEL_H_

// Finite linear two-player zero-sum Markov games.
//
// A game is described by a feature map phi(x, a, b) in R^d, and per step h a
// reward weight theta_h in R^d and a d x |S| matrix mu_h whose column x' is
// the (possibly signed) measure mu_h({x'}). Rewards and transitions are
//
//   r_h(x, a, b)      = phi(x, a, b)^T theta_h
//   P_h(x' | x, a, b) = phi(x, a, b)^T mu_h(:, x')
//
// Steps are 0-based throughout the library: h in [0, H).

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "omnivi/rng.h"

namespace omnivi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Probability vector over actions.
using MixedStrategy = Eigen::VectorXd;

// Markov policy of one player: policy[h][x] is a distribution over actions.
using MarkovPolicy = std::vector<std::vector<MixedStrategy>>;

inline constexpr double kClampTolerance = 1e-12;
inline constexpr double kSumTolerance = 1e-9;

// Initial state: a fixed state or a fixed distribution over states.
struct InitialState {
  std::optional<int> state = 0;
  std::vector<double> distribution;  // used when `state` is empty

  static InitialState Fixed(int x) { return InitialState{x, {}}; }
  static InitialState Distribution(std::vector<double> probs) {
    return InitialState{std::nullopt, std::move(probs)};
  }
};

struct StepOutcome {
  double reward = 0.0;
  std::vector<double> next_dist;
};

class GameSpec {
 public:
  // `features` is indexed by FeatureIndex(x, a, b); `theta` and `mu` hold one
  // entry per step. No validation happens here (see Validate).
  GameSpec(int dim, int horizon, int num_states, int num_actions,
           std::vector<Vector> features, std::vector<Vector> theta,
           std::vector<Matrix> mu, InitialState initial = {});

  int dim() const { return dim_; }
  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  const InitialState& initial_state() const { return initial_; }
  void set_initial_state(InitialState initial);

  int FeatureIndex(int x, int a, int b) const {
    return (x * num_actions_ + a) * num_actions_ + b;
  }
  const Vector& Feature(int x, int a, int b) const;
  const std::vector<Vector>& features() const { return features_; }
  const Vector& theta(int h) const { return theta_.at(h); }
  const Matrix& mu(int h) const { return mu_.at(h); }

  // Reward and next-state distribution at (h, x, a, b). Entries of the induced
  // distribution in [-1e-12, 0) are clamped to zero and the row renormalized;
  // anything worse is a model-validity error.
  StepOutcome Query(int h, int x, int a, int b) const;

  // Inverse-CDF draw from P_h(.|x, a, b) using one uniform from `rng`.
  int SampleNext(int h, int x, int a, int b, Rng& rng) const;

  // Draws x_1. A fixed initial state consumes no randomness.
  int SampleInitial(Rng& rng) const;

 private:
  void CheckIndices(int h, int x, int a, int b) const;

  int dim_;
  int horizon_;
  int num_states_;
  int num_actions_;
  std::vector<Vector> features_;
  std::vector<Vector> theta_;
  std::vector<Matrix> mu_;
  InitialState initial_;
};

// Turn-based game: one player acts per state. features are indexed by
// x * |A| + a; owner[x] is 1 or 2.
struct TurnSpec {
  int dim = 0;
  int horizon = 0;
  int num_states = 0;
  int num_actions = 0;
  std::vector<Vector> features;
  std::vector<Vector> theta;
  std::vector<Matrix> mu;
  std::vector<int> owner;
  InitialState initial;

  const Vector& Feature(int x, int a) const {
    return features.at(x * num_actions + a);
  }
};

// Dense tables for the tabular special case.
struct TabularTables {
  int horizon = 0;
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> reward;      // [h][x][a][b]
  std::vector<double> transition;  // [h][x][a][b][x']

  TabularTables() = default;
  TabularTables(int horizon, int num_states, int num_actions);

  double& Reward(int h, int x, int a, int b);
  double Reward(int h, int x, int a, int b) const;
  double& Transition(int h, int x, int a, int b, int next);
  double Transition(int h, int x, int a, int b, int next) const;

 private:
  std::size_t Offset(int h, int x, int a, int b) const;
};

// Tabular turn-based tables: reward [h][x][a], transition [h][x][a][x'].
struct TabularTurnTables {
  int horizon = 0;
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> reward;
  std::vector<double> transition;
  std::vector<int> owner;

  TabularTurnTables() = default;
  TabularTurnTables(int horizon, int num_states, int num_actions);

  double& Reward(int h, int x, int a);
  double Reward(int h, int x, int a) const;
  double& Transition(int h, int x, int a, int next);
  double Transition(int h, int x, int a, int next) const;

 private:
  std::size_t Offset(int h, int x, int a) const;
};

// Indicator features over (x, a, b): d = |S||A|^2.
GameSpec TabularGame(const TabularTables& tables);

// Indicator features over (x, a): d = |S||A|.
TurnSpec TabularTurnGame(const TabularTurnTables& tables);

// Random valid linear game: features on the probability simplex, each row of
// mu_h a probability vector over S, theta_h uniform in [-1, 1]^d.
GameSpec RandomSimplexGame(int dim, int num_states, int num_actions,
                           int horizon, Rng& rng);

// Simultaneous-move view of a turn-based game: at owner-1 states
// phi(x, a, b) = phi(x, a), at owner-2 states phi(x, a, b) = phi(x, b).
GameSpec EmbedTurnBased(const TurnSpec& turn);

struct Violation {
  std::string invariant;
  int h = -1;
  int x = -1;
  int a = -1;
  int b = -1;
  double magnitude = 0.0;

  std::string Describe() const;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string Describe() const;
};

ValidationReport Validate(const GameSpec& spec);
ValidationReport Validate(const TurnSpec& turn);

}  // namespace omnivi

#endif  // OMNIVI_GAME_MODEL_H_
