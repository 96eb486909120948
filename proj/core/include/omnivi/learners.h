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

#ifndef OMNIVI_LEARNERS_H_
#define OMNIVI_LEARNERS_H_

// Optimistic minimax value iteration with least-squares estimates.
//
// Every learner keeps one GramState per step. At the start of episode k it
// builds a plan by backward induction over h = H-1, ..., 0: ridge estimates
// of the Q coefficients from the k-1 stored transitions, bonus-augmented
// (and clipped) Q functions, and per-state values evaluated lazily, only at
// the states the ridge targets or the live trajectory actually need.
//
//   offline (simultaneous)  upper/lower Q, CCE of the rounded general-sum game
//   online  (simultaneous)  upper Q only, zero-sum NE of the raw Q matrix
//   turn-based offline      upper/lower Q, rounded argmax / argmin by owner
//   turn-based online       upper Q, max / min by owner
//
// Learners see features only; the environment reveals rewards and next
// states one step at a time.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "omnivi/eps_net.h"
#include "omnivi/game_model.h"
#include "omnivi/matrix_equilibria.h"
#include "omnivi/regression.h"
#include "omnivi/rng.h"

namespace omnivi {

// Feature-only view of a simultaneous-move game.
class FeatureView {
 public:
  explicit FeatureView(const GameSpec& spec) : spec_(&spec) {}

  int dim() const { return spec_->dim(); }
  int horizon() const { return spec_->horizon(); }
  int num_states() const { return spec_->num_states(); }
  int num_actions() const { return spec_->num_actions(); }
  const Vector& Phi(int x, int a, int b) const {
    return spec_->Feature(x, a, b);
  }

 private:
  const GameSpec* spec_;
};

// Feature-only view of a turn-based game.
class TurnFeatureView {
 public:
  explicit TurnFeatureView(const TurnSpec& spec) : spec_(&spec) {}

  int dim() const { return spec_->dim; }
  int horizon() const { return spec_->horizon; }
  int num_states() const { return spec_->num_states; }
  int num_actions() const { return spec_->num_actions; }
  int owner(int x) const { return spec_->owner.at(x); }
  const Vector& Phi(int x, int a) const { return spec_->Feature(x, a); }

 private:
  const TurnSpec* spec_;
};

struct Transition {
  double reward = 0.0;
  int next_state = 0;
};

// The true game as the learner experiences it. Owns the environment's random
// stream.
class Environment {
 public:
  Environment(const GameSpec& spec, Rng rng) : spec_(&spec), rng_(rng) {}

  int Reset() { return spec_->SampleInitial(rng_); }
  Transition Step(int h, int x, int a, int b);

 private:
  const GameSpec* spec_;
  Rng rng_;
};

struct LearnerConfig {
  int episodes = 1;  // K
  double c = 1.0;    // bonus constant
  double p = 0.05;   // confidence parameter
};

// beta = c * d * H * sqrt(iota), iota = log(2 d T / p), T = K H.
double BonusBeta(int dim, int horizon, int episodes, double c, double p);

// Rounding accuracy used inside the offline learners: 1 / (K H).
double NetAccuracy(int episodes, int horizon);

struct StepRecord {
  int x = 0;
  int a = 0;
  int b = 0;
  double reward = 0.0;
};

struct EpisodeRecord {
  int k = 0;
  std::vector<StepRecord> steps;
  int final_state = 0;
  double upper_value = 0.0;  // offline: V-bar_1(x_1); online: V_1(x_1)
  double lower_value = 0.0;  // offline only
  // max over steps of ||w|| / (2 H sqrt(d k)); <= 1 by construction.
  double coefficient_ratio = 0.0;

  int initial_state() const { return steps.empty() ? 0 : steps.front().x; }
};

// ---------------------------------------------------------------------------
// Offline, simultaneous moves.

class OfflinePlan {
 public:
  OfflinePlan(const FeatureView& view, int k, double eps_net);

  int k() const { return k_; }
  double eps_net() const { return eps_net_; }
  const QParams& upper(int h) const { return upper_.at(h); }
  const QParams& lower(int h) const { return lower_.at(h); }

  // Memoized CCE of the rounded (upper, lower) game at (h, x).
  const JointDistribution& Cce(int h, int x);

  // E_sigma[Q-bar] and E_sigma[Q-under] with the unrounded Q; 0 at h == H.
  double UpperValue(int h, int x);
  double LowerValue(int h, int x);

  // Payoff matrices at x: unrounded and rounded.
  Matrix UpperMatrix(int h, int x) const;
  Matrix LowerMatrix(int h, int x) const;
  Matrix RoundedUpperMatrix(int h, int x) const;
  Matrix RoundedLowerMatrix(int h, int x) const;

  // Marginals of sigma_h(x) at every state.
  std::pair<MarkovPolicy, MarkovPolicy> MarginalPolicies();

  double coefficient_ratio() const { return coefficient_ratio_; }
  int cce_solves() const { return cce_solves_; }

 private:
  friend class OfflineLearner;

  struct Entry {
    JointDistribution sigma;
    double upper = 0.0;
    double lower = 0.0;
  };
  const Entry& Lookup(int h, int x);
  void SetStep(int h, QParams upper, QParams lower);

  FeatureView view_;
  int k_;
  double eps_net_;
  std::vector<QParams> upper_;
  std::vector<QParams> lower_;
  std::vector<QParams> upper_rounded_;
  std::vector<QParams> lower_rounded_;
  std::vector<std::vector<std::optional<Entry>>> memo_;
  double coefficient_ratio_ = 0.0;
  int cce_solves_ = 0;
};

// FIND_CCE: the memoized equilibrium of the rounded game at (h, x).
const JointDistribution& FindCce(OfflinePlan& plan, int h, int x);

class OfflineLearner {
 public:
  OfflineLearner(const GameSpec& spec, LearnerConfig config);

  double beta() const { return beta_; }
  double eps_net() const { return eps_net_; }
  int episodes_done() const { return episodes_done_; }
  const std::vector<GramState>& grams() const { return grams_; }

  // Plan for episode k = episodes_done() + 1, built on first use.
  OfflinePlan& Plan();

  // Plays episode k with joint actions drawn from sigma_h(x_h) using `rng`,
  // then appends each step's sample to its GramState.
  EpisodeRecord RunEpisode(Environment& env, Rng& rng);

 private:
  FeatureView view_;
  LearnerConfig config_;
  double beta_;
  double eps_net_;
  std::vector<GramState> grams_;
  std::optional<OfflinePlan> plan_;
  int episodes_done_ = 0;
};

// ---------------------------------------------------------------------------
// Online, simultaneous moves.

class OnlinePlan {
 public:
  OnlinePlan(const FeatureView& view, int k);

  int k() const { return k_; }
  const QParams& params(int h) const { return params_.at(h); }

  // NE of the zero-sum game Q_h(x, ., .); memoized.
  const ZeroSumSolution& Equilibrium(int h, int x);
  // Zero-sum value of Q_h(x, ., .); 0 at h == H.
  double Value(int h, int x);
  Matrix QMatrix(int h, int x) const;

  // Row strategy at every state.
  MarkovPolicy Policy();

  double coefficient_ratio() const { return coefficient_ratio_; }

 private:
  friend class OnlineLearner;

  FeatureView view_;
  int k_;
  std::vector<QParams> params_;
  std::vector<std::vector<std::optional<ZeroSumSolution>>> memo_;
  double coefficient_ratio_ = 0.0;
};

struct OpponentContext {
  int k = 0;
  int h = 0;
  int x = 0;
  std::span<const EpisodeRecord> past;
};

// The uncontrolled player. Act() is called before it can observe the
// controlled player's action at the current step.
class Opponent {
 public:
  virtual ~Opponent() = default;

  // `learner_policy` is the controlled player's Markov policy for episode k;
  // only omniscient opponents look at it.
  virtual void BeginEpisode(int k, const MarkovPolicy& learner_policy) {
    (void)k;
    (void)learner_policy;
  }
  virtual int Act(const OpponentContext& context) = 0;

  // Learners skip computing the full policy for opponents that ignore it.
  virtual bool WantsLearnerPolicy() const { return false; }

  // The Markov policy played this episode, when the opponent has one.
  virtual std::optional<MarkovPolicy> CurrentPolicy() const {
    return std::nullopt;
  }
};

class OnlineLearner {
 public:
  OnlineLearner(const GameSpec& spec, LearnerConfig config);

  double beta() const { return beta_; }
  int episodes_done() const { return episodes_done_; }
  const std::vector<GramState>& grams() const { return grams_; }
  const std::vector<EpisodeRecord>& episodes() const { return episodes_; }

  OnlinePlan& Plan();
  EpisodeRecord RunEpisode(Environment& env, Opponent& opponent, Rng& rng);

 private:
  FeatureView view_;
  LearnerConfig config_;
  double beta_;
  std::vector<GramState> grams_;
  std::optional<OnlinePlan> plan_;
  std::vector<EpisodeRecord> episodes_;
  int episodes_done_ = 0;
};

// ---------------------------------------------------------------------------
// Turn-based.

// Rounds q to accuracy eps and returns argmax_a of the rounded Q(x, a), lowest
// index on ties.
int FindMax(const TurnFeatureView& view, const QParams& q, int x, double eps);
// FindMax applied to -Q.
int FindMin(const TurnFeatureView& view, const QParams& q, int x, double eps);

class TurnOfflinePlan {
 public:
  TurnOfflinePlan(const TurnFeatureView& view, int k, double eps_net);

  int k() const { return k_; }
  const QParams& upper(int h) const { return upper_.at(h); }
  const QParams& lower(int h) const { return lower_.at(h); }

  // Action of the owner of x at step h (FindMax on the upper Q for owner 1,
  // FindMin on the lower Q for owner 2).
  int Action(int h, int x);
  double UpperValue(int h, int x);
  double LowerValue(int h, int x);

  // (pi, nu) as policies of the embedded simultaneous game. At states the
  // player does not own, it plays action 0.
  std::pair<MarkovPolicy, MarkovPolicy> Policies();

  double coefficient_ratio() const { return coefficient_ratio_; }

 private:
  friend class TurnOfflineLearner;

  TurnFeatureView view_;
  int k_;
  double eps_net_;
  std::vector<QParams> upper_;
  std::vector<QParams> lower_;
  std::vector<std::vector<int>> action_;  // -1 until evaluated
  double coefficient_ratio_ = 0.0;
};

class TurnOfflineLearner {
 public:
  TurnOfflineLearner(const TurnSpec& spec, LearnerConfig config);

  double beta() const { return beta_; }
  double eps_net() const { return eps_net_; }
  const std::vector<GramState>& grams() const { return grams_; }

  TurnOfflinePlan& Plan();
  // `env` must wrap EmbedTurnBased(spec); the inactive slot is action 0.
  EpisodeRecord RunEpisode(Environment& env);

 private:
  TurnFeatureView view_;
  LearnerConfig config_;
  double beta_;
  double eps_net_;
  std::vector<GramState> grams_;
  std::optional<TurnOfflinePlan> plan_;
  int episodes_done_ = 0;
};

class TurnOnlinePlan {
 public:
  TurnOnlinePlan(const TurnFeatureView& view, int k);

  int k() const { return k_; }
  const QParams& params(int h) const { return params_.at(h); }

  // argmax_a Q at owner-1 states, argmin_a at owner-2 states.
  int Action(int h, int x) const;
  double Value(int h, int x) const;

  // Player 1's policy in the embedded game (action 0 where it does not own).
  MarkovPolicy Policy() const;

  double coefficient_ratio() const { return coefficient_ratio_; }

 private:
  friend class TurnOnlineLearner;

  TurnFeatureView view_;
  int k_;
  std::vector<QParams> params_;
  double coefficient_ratio_ = 0.0;
};

class TurnOnlineLearner {
 public:
  TurnOnlineLearner(const TurnSpec& spec, LearnerConfig config);

  double beta() const { return beta_; }
  const std::vector<GramState>& grams() const { return grams_; }
  const std::vector<EpisodeRecord>& episodes() const { return episodes_; }

  TurnOnlinePlan& Plan();
  // The opponent is consulted only at owner-2 states.
  EpisodeRecord RunEpisode(Environment& env, Opponent& opponent);

 private:
  TurnFeatureView view_;
  LearnerConfig config_;
  double beta_;
  std::vector<GramState> grams_;
  std::optional<TurnOnlinePlan> plan_;
  std::vector<EpisodeRecord> episodes_;
  int episodes_done_ = 0;
};

}  // namespace omnivi

#endif  // OMNIVI_LEARNERS_H_
