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

#include "omnivi/evaluation.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "omnivi/errors.h"
#include "omnivi/matrix_equilibria.h"

namespace omnivi {
namespace {

// Fills Q_h from V_{h+1} already stored in `table`.
void BackupQ(const ExactModel& model, ValueTable& table, int h) {
  const int states = model.num_states();
  const int n = model.num_actions();
  for (int x = 0; x < states; ++x) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const double* next = model.Next(h, x, a, b);
        double q = model.Reward(h, x, a, b);
        for (int y = 0; y < states; ++y) q += next[y] * table.V(h + 1, y);
        table.Q(h, x, a, b) = q;
      }
    }
  }
}

// Expected Q against the fixed side's strategy: one entry per action of the
// responding player.
Vector ResponsePayoffs(const ValueTable& table, int h, int x,
                       const MixedStrategy& strategy, FixedSide fixed) {
  const Matrix q = table.QMatrix(h, x);
  if (fixed == FixedSide::kRow) return q.transpose() * strategy;
  return q * strategy;
}

}  // namespace

ExactModel::ExactModel(const GameSpec& spec)
    : spec_(&spec),
      horizon_(spec.horizon()),
      num_states_(spec.num_states()),
      num_actions_(spec.num_actions()) {
  const std::size_t cells = static_cast<std::size_t>(horizon_) * num_states_ *
                            num_actions_ * num_actions_;
  reward_.resize(cells);
  next_.resize(cells * num_states_);
  for (int h = 0; h < horizon_; ++h) {
    for (int x = 0; x < num_states_; ++x) {
      for (int a = 0; a < num_actions_; ++a) {
        for (int b = 0; b < num_actions_; ++b) {
          const StepOutcome out = spec.Query(h, x, a, b);
          const std::size_t i = Index(h, x, a, b);
          reward_[i] = out.reward;
          std::copy(out.next_dist.begin(), out.next_dist.end(),
                    next_.begin() + static_cast<std::ptrdiff_t>(i) * num_states_);
        }
      }
    }
  }
}

ValueTable::ValueTable(int horizon, int num_states, int num_actions)
    : horizon_(horizon),
      num_states_(num_states),
      num_actions_(num_actions),
      v_(static_cast<std::size_t>(horizon + 1) * num_states, 0.0),
      q_(static_cast<std::size_t>(horizon) * num_states * num_actions *
             num_actions,
         0.0) {}

Matrix ValueTable::QMatrix(int h, int x) const {
  Matrix m(num_actions_, num_actions_);
  for (int a = 0; a < num_actions_; ++a)
    for (int b = 0; b < num_actions_; ++b) m(a, b) = Q(h, x, a, b);
  return m;
}

ValueTable ExactNash(const ExactModel& model, MinimaxOrder order) {
  ValueTable table(model.horizon(), model.num_states(), model.num_actions());
  for (int h = model.horizon() - 1; h >= 0; --h) {
    BackupQ(model, table, h);
    for (int x = 0; x < model.num_states(); ++x) {
      const Matrix q = table.QMatrix(h, x);
      table.V(h, x) = order == MinimaxOrder::kMaxMin
                          ? SolveZeroSum(q).value
                          : -SolveZeroSum(-q.transpose()).value;
    }
  }
  return table;
}

void CheckPolicy(const ExactModel& model, const MarkovPolicy& policy) {
  Require(static_cast<int>(policy.size()) == model.horizon(),
          ErrorKind::kInput, "policy does not cover every step");
  for (int h = 0; h < model.horizon(); ++h) {
    Require(static_cast<int>(policy[h].size()) == model.num_states(),
            ErrorKind::kInput,
            "policy does not cover every state at step " + std::to_string(h));
    for (int x = 0; x < model.num_states(); ++x) {
      const MixedStrategy& s = policy[h][x];
      Require(s.size() == model.num_actions() && IsDistribution(s),
              ErrorKind::kInput,
              "policy entry at (" + std::to_string(h) + ", " +
                  std::to_string(x) + ") is not a distribution");
    }
  }
}

ValueTable BestResponseValues(const ExactModel& model,
                              const MarkovPolicy& policy, FixedSide fixed) {
  CheckPolicy(model, policy);
  ValueTable table(model.horizon(), model.num_states(), model.num_actions());
  for (int h = model.horizon() - 1; h >= 0; --h) {
    BackupQ(model, table, h);
    for (int x = 0; x < model.num_states(); ++x) {
      const Vector payoffs = ResponsePayoffs(table, h, x, policy[h][x], fixed);
      table.V(h, x) =
          fixed == FixedSide::kRow ? payoffs.minCoeff() : payoffs.maxCoeff();
    }
  }
  return table;
}

MarkovPolicy BestResponsePolicy(const ExactModel& model,
                                const MarkovPolicy& policy, FixedSide fixed) {
  const ValueTable table = BestResponseValues(model, policy, fixed);
  MarkovPolicy response(model.horizon());
  for (int h = 0; h < model.horizon(); ++h) {
    for (int x = 0; x < model.num_states(); ++x) {
      const Vector payoffs = ResponsePayoffs(table, h, x, policy[h][x], fixed);
      int best = 0;
      for (int i = 1; i < payoffs.size(); ++i) {
        const bool better = fixed == FixedSide::kRow
                                ? payoffs(i) < payoffs(best)
                                : payoffs(i) > payoffs(best);
        if (better) best = i;
      }
      MixedStrategy s = MixedStrategy::Zero(model.num_actions());
      s(best) = 1.0;
      response[h].push_back(std::move(s));
    }
  }
  return response;
}

ValueTable PolicyValue(const ExactModel& model, const MarkovPolicy& pi,
                       const MarkovPolicy& nu) {
  CheckPolicy(model, pi);
  CheckPolicy(model, nu);
  ValueTable table(model.horizon(), model.num_states(), model.num_actions());
  for (int h = model.horizon() - 1; h >= 0; --h) {
    BackupQ(model, table, h);
    for (int x = 0; x < model.num_states(); ++x) {
      table.V(h, x) = pi[h][x].dot(table.QMatrix(h, x) * nu[h][x]);
    }
  }
  return table;
}

Vector LinearWeights(const GameSpec& spec, const ValueTable& values, int h) {
  Vector next(spec.num_states());
  for (int y = 0; y < spec.num_states(); ++y) next(y) = values.V(h + 1, y);
  return spec.theta(h) + spec.mu(h) * next;
}

MarkovPolicy UniformPolicy(int horizon, int num_states, int num_actions) {
  const MixedStrategy uniform =
      MixedStrategy::Constant(num_actions, 1.0 / num_actions);
  return MarkovPolicy(horizon, std::vector<MixedStrategy>(num_states, uniform));
}

EpisodeMetrics EvaluateOffline(const ExactModel& model, const ValueTable& nash,
                               const EpisodeRecord& record,
                               const MarkovPolicy& pi, const MarkovPolicy& nu) {
  const int x1 = record.initial_state();
  EpisodeMetrics m;
  m.k = record.k;
  m.initial_state = x1;
  m.ucb = record.upper_value;
  m.lcb = record.lower_value;
  m.nash_value = nash.V(0, x1);
  m.pi_star = BestResponseValues(model, pi, FixedSide::kRow).V(0, x1);
  m.star_nu = BestResponseValues(model, nu, FixedSide::kColumn).V(0, x1);
  m.pi_nu = PolicyValue(model, pi, nu).V(0, x1);
  m.gap = *m.star_nu - m.pi_star;
  m.exploit1 = *m.pi_nu - m.pi_star;
  m.exploit2 = *m.star_nu - *m.pi_nu;
  m.regret = m.nash_value - *m.pi_nu;
  return m;
}

EpisodeMetrics EvaluateOnline(const ExactModel& model, const ValueTable& nash,
                              const EpisodeRecord& record,
                              const MarkovPolicy& pi,
                              const std::optional<MarkovPolicy>& nu) {
  const int x1 = record.initial_state();
  EpisodeMetrics m;
  m.k = record.k;
  m.initial_state = x1;
  m.ucb = record.upper_value;
  m.nash_value = nash.V(0, x1);
  m.pi_star = BestResponseValues(model, pi, FixedSide::kRow).V(0, x1);
  if (nu) {
    m.star_nu = BestResponseValues(model, *nu, FixedSide::kColumn).V(0, x1);
    m.pi_nu = PolicyValue(model, pi, *nu).V(0, x1);
    m.gap = *m.star_nu - m.pi_star;
    m.exploit1 = *m.pi_nu - m.pi_star;
    m.exploit2 = *m.star_nu - *m.pi_nu;
    m.regret = m.nash_value - *m.pi_nu;
  }
  return m;
}

void MetricsSeries::Append(EpisodeMetrics metrics) {
  auto accumulate = [](const std::vector<std::optional<double>>& sums,
                       const std::optional<double>& term) {
    std::optional<double> prev =
        sums.empty() ? std::optional<double>(0.0) : sums.back();
    if (!prev || !term) return std::optional<double>();
    return std::optional<double>(*prev + *term);
  };
  cum_gap_.push_back(accumulate(cum_gap_, metrics.gap));
  cum_regret_.push_back(accumulate(cum_regret_, metrics.regret));
  episodes_.push_back(std::move(metrics));
}

std::string ToString(OpponentKind kind) {
  switch (kind) {
    case OpponentKind::kUniform:
      return "uniform";
    case OpponentKind::kFixedMarkov:
      return "fixed_markov";
    case OpponentKind::kBestResponse:
      return "best_response";
  }
  return "unknown";
}

OpponentKind ParseOpponentKind(const std::string& name) {
  if (name == "uniform") return OpponentKind::kUniform;
  if (name == "fixed_markov") return OpponentKind::kFixedMarkov;
  if (name == "best_response" || name == "best_response_oracle")
    return OpponentKind::kBestResponse;
  Fail(ErrorKind::kConfig, "unknown opponent kind '" + name + "'");
}

UniformOpponent::UniformOpponent(int horizon, int num_states, int num_actions,
                                 Rng rng)
    : policy_(UniformPolicy(horizon, num_states, num_actions)),
      num_actions_(num_actions),
      rng_(rng) {}

int UniformOpponent::Act(const OpponentContext&) {
  return rng_.Below(num_actions_);
}

FixedMarkovOpponent::FixedMarkovOpponent(MarkovPolicy policy, Rng rng)
    : policy_(std::move(policy)), rng_(rng) {}

int FixedMarkovOpponent::Act(const OpponentContext& context) {
  const MixedStrategy& s = policy_.at(context.h).at(context.x);
  return rng_.Categorical({s.data(), static_cast<std::size_t>(s.size())});
}

void BestResponseOpponent::BeginEpisode(int, const MarkovPolicy& learner_policy) {
  policy_ = BestResponsePolicy(*model_, learner_policy, FixedSide::kRow);
}

int BestResponseOpponent::Act(const OpponentContext& context) {
  Require(policy_.has_value(), ErrorKind::kInternalState,
          "best-response opponent used before BeginEpisode");
  const MixedStrategy& s = policy_->at(context.h).at(context.x);
  int action = 0;
  s.maxCoeff(&action);
  return action;
}

std::unique_ptr<Opponent> MakeOpponent(OpponentKind kind,
                                       const ExactModel& model, Rng rng,
                                       std::optional<MarkovPolicy> fixed_policy) {
  switch (kind) {
    case OpponentKind::kUniform:
      return std::make_unique<UniformOpponent>(
          model.horizon(), model.num_states(), model.num_actions(), rng);
    case OpponentKind::kFixedMarkov:
      Require(fixed_policy.has_value(), ErrorKind::kConfig,
              "fixed_markov opponent needs a policy");
      CheckPolicy(model, *fixed_policy);
      return std::make_unique<FixedMarkovOpponent>(std::move(*fixed_policy),
                                                   rng);
    case OpponentKind::kBestResponse:
      return std::make_unique<BestResponseOpponent>(model);
  }
  Fail(ErrorKind::kConfig, "unknown opponent kind");
}

}  // namespace omnivi
