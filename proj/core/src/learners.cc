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

#include "omnivi/learners.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "omnivi/errors.h"

namespace omnivi {
namespace {

std::span<const double> AsSpan(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// sigma flattened as index a * |A| + b.
std::vector<double> Flatten(const JointDistribution& sigma) {
  const int n = sigma.num_actions();
  std::vector<double> flat(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) flat[a * n + b] = sigma(a, b);
  }
  return flat;
}

double CoefficientRatio(const QParams& q) {
  return q.w.norm() / q.WeightRadius();
}

void RequireHistory(const GramState& gram, int k, int h) {
  Require(gram.size() == k - 1, ErrorKind::kInternalState,
          "step " + std::to_string(h) + " holds " +
              std::to_string(gram.size()) + " samples at episode " +
              std::to_string(k));
}

QParams MakeParams(Vector w, const GramState& gram, int rho, double beta,
                   int horizon, int k) {
  QParams q;
  q.w = std::move(w);
  q.ainv = gram.inverse();
  q.rho = rho;
  q.beta = beta;
  q.horizon = horizon;
  q.k = k;
  return q;
}

MixedStrategy PointMass(int n, int action) {
  MixedStrategy s = MixedStrategy::Zero(n);
  s(action) = 1.0;
  return s;
}

}  // namespace

Transition Environment::Step(int h, int x, int a, int b) {
  const StepOutcome outcome = spec_->Query(h, x, a, b);
  return {outcome.reward, rng_.Categorical(outcome.next_dist)};
}

double BonusBeta(int dim, int horizon, int episodes, double c, double p) {
  Require(dim > 0 && horizon > 0 && episodes > 0, ErrorKind::kInput,
          "bonus needs positive d, H and K");
  Require(c > 0.0 && p > 0.0 && p < 1.0, ErrorKind::kInput,
          "bonus needs c > 0 and p in (0, 1)");
  const double total_steps = static_cast<double>(episodes) * horizon;
  const double iota = std::log(2.0 * dim * total_steps / p);
  return c * dim * horizon * std::sqrt(iota);
}

double NetAccuracy(int episodes, int horizon) {
  Require(episodes > 0 && horizon > 0, ErrorKind::kInput,
          "net accuracy needs positive K and H");
  return 1.0 / (static_cast<double>(episodes) * horizon);
}

// ---------------------------------------------------------------------------

OfflinePlan::OfflinePlan(const FeatureView& view, int k, double eps_net)
    : view_(view),
      k_(k),
      eps_net_(eps_net),
      upper_(view.horizon()),
      lower_(view.horizon()),
      upper_rounded_(view.horizon()),
      lower_rounded_(view.horizon()),
      memo_(view.horizon(),
            std::vector<std::optional<Entry>>(view.num_states())) {}

void OfflinePlan::SetStep(int h, QParams upper, QParams lower) {
  coefficient_ratio_ = std::max(
      {coefficient_ratio_, CoefficientRatio(upper), CoefficientRatio(lower)});
  upper_rounded_[h] = RoundQParams(upper, eps_net_);
  lower_rounded_[h] = RoundQParams(lower, eps_net_);
  upper_[h] = std::move(upper);
  lower_[h] = std::move(lower);
}

Matrix OfflinePlan::UpperMatrix(int h, int x) const {
  const int n = view_.num_actions();
  Matrix m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m(a, b) = EvalQ(upper_[h], view_.Phi(x, a, b));
  return m;
}

Matrix OfflinePlan::LowerMatrix(int h, int x) const {
  const int n = view_.num_actions();
  Matrix m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m(a, b) = EvalQ(lower_[h], view_.Phi(x, a, b));
  return m;
}

Matrix OfflinePlan::RoundedUpperMatrix(int h, int x) const {
  const int n = view_.num_actions();
  Matrix m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      m(a, b) = EvalQ(upper_rounded_[h], view_.Phi(x, a, b));
  return m;
}

Matrix OfflinePlan::RoundedLowerMatrix(int h, int x) const {
  const int n = view_.num_actions();
  Matrix m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      m(a, b) = EvalQ(lower_rounded_[h], view_.Phi(x, a, b));
  return m;
}

const OfflinePlan::Entry& OfflinePlan::Lookup(int h, int x) {
  Require(h >= 0 && h < view_.horizon() && x >= 0 &&
              x < view_.num_states(),
          ErrorKind::kInput, "plan lookup out of range");
  std::optional<Entry>& slot = memo_[h][x];
  if (!slot) {
    Entry entry;
    entry.sigma = SolveCce(RoundedUpperMatrix(h, x), RoundedLowerMatrix(h, x));
    ++cce_solves_;
    entry.upper = entry.sigma.Expect(UpperMatrix(h, x));
    entry.lower = entry.sigma.Expect(LowerMatrix(h, x));
    slot = std::move(entry);
  }
  return *slot;
}

const JointDistribution& OfflinePlan::Cce(int h, int x) {
  return Lookup(h, x).sigma;
}

double OfflinePlan::UpperValue(int h, int x) {
  return h == view_.horizon() ? 0.0 : Lookup(h, x).upper;
}

double OfflinePlan::LowerValue(int h, int x) {
  return h == view_.horizon() ? 0.0 : Lookup(h, x).lower;
}

std::pair<MarkovPolicy, MarkovPolicy> OfflinePlan::MarginalPolicies() {
  const int horizon = view_.horizon();
  const int states = view_.num_states();
  MarkovPolicy pi(horizon), nu(horizon);
  for (int h = 0; h < horizon; ++h) {
    pi[h].resize(states);
    nu[h].resize(states);
    for (int x = 0; x < states; ++x) {
      std::tie(pi[h][x], nu[h][x]) = Marginals(Cce(h, x));
    }
  }
  return {std::move(pi), std::move(nu)};
}

const JointDistribution& FindCce(OfflinePlan& plan, int h, int x) {
  return plan.Cce(h, x);
}

OfflineLearner::OfflineLearner(const GameSpec& spec, LearnerConfig config)
    : view_(spec),
      config_(config),
      beta_(BonusBeta(spec.dim(), spec.horizon(), config.episodes, config.c,
                      config.p)),
      eps_net_(NetAccuracy(config.episodes, spec.horizon())),
      grams_(spec.horizon(), GramState(spec.dim())) {}

OfflinePlan& OfflineLearner::Plan() {
  if (plan_) return *plan_;
  const int k = episodes_done_ + 1;
  const int horizon = view_.horizon();
  OfflinePlan plan(view_, k, eps_net_);
  std::vector<double> upper_targets, lower_targets;
  for (int h = horizon - 1; h >= 0; --h) {
    const GramState& gram = grams_[h];
    RequireHistory(gram, k, h);
    upper_targets.clear();
    lower_targets.clear();
    for (const Sample& s : gram.history()) {
      upper_targets.push_back(s.reward + plan.UpperValue(h + 1, s.next_state));
      lower_targets.push_back(s.reward + plan.LowerValue(h + 1, s.next_state));
    }
    plan.SetStep(
        h, MakeParams(gram.RidgeSolve(upper_targets), gram, +1, beta_, horizon, k),
        MakeParams(gram.RidgeSolve(lower_targets), gram, -1, beta_, horizon, k));
  }
  plan_.emplace(std::move(plan));
  return *plan_;
}

EpisodeRecord OfflineLearner::RunEpisode(Environment& env, Rng& rng) {
  OfflinePlan& plan = Plan();
  const int horizon = view_.horizon();
  const int n = view_.num_actions();
  EpisodeRecord record;
  record.k = plan.k();
  record.steps.reserve(horizon);
  int x = env.Reset();
  record.upper_value = plan.UpperValue(0, x);
  record.lower_value = plan.LowerValue(0, x);
  record.coefficient_ratio = plan.coefficient_ratio();
  for (int h = 0; h < horizon; ++h) {
    const std::vector<double> flat = Flatten(plan.Cce(h, x));
    const int joint = rng.Categorical(flat);
    const int a = joint / n;
    const int b = joint % n;
    const Transition t = env.Step(h, x, a, b);
    record.steps.push_back({x, a, b, t.reward});
    x = t.next_state;
  }
  record.final_state = x;
  for (int h = 0; h < horizon; ++h) {
    const StepRecord& s = record.steps[h];
    const int next = h + 1 < horizon ? record.steps[h + 1].x : x;
    grams_[h].Update(view_.Phi(s.x, s.a, s.b), next, s.reward);
  }
  plan_.reset();
  ++episodes_done_;
  return record;
}

// ---------------------------------------------------------------------------

OnlinePlan::OnlinePlan(const FeatureView& view, int k)
    : view_(view),
      k_(k),
      params_(view.horizon()),
      memo_(view.horizon(),
            std::vector<std::optional<ZeroSumSolution>>(view.num_states())) {}

Matrix OnlinePlan::QMatrix(int h, int x) const {
  const int n = view_.num_actions();
  Matrix m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      m(a, b) = EvalQ(params_[h], view_.Phi(x, a, b));
  return m;
}

const ZeroSumSolution& OnlinePlan::Equilibrium(int h, int x) {
  Require(h >= 0 && h < view_.horizon() && x >= 0 &&
              x < view_.num_states(),
          ErrorKind::kInput, "plan lookup out of range");
  std::optional<ZeroSumSolution>& slot = memo_[h][x];
  if (!slot) slot = SolveZeroSum(QMatrix(h, x));
  return *slot;
}

double OnlinePlan::Value(int h, int x) {
  return h == view_.horizon() ? 0.0 : Equilibrium(h, x).value;
}

MarkovPolicy OnlinePlan::Policy() {
  MarkovPolicy pi(view_.horizon());
  for (int h = 0; h < view_.horizon(); ++h) {
    pi[h].reserve(view_.num_states());
    for (int x = 0; x < view_.num_states(); ++x)
      pi[h].push_back(Equilibrium(h, x).row);
  }
  return pi;
}

OnlineLearner::OnlineLearner(const GameSpec& spec, LearnerConfig config)
    : view_(spec),
      config_(config),
      beta_(BonusBeta(spec.dim(), spec.horizon(), config.episodes, config.c,
                      config.p)),
      grams_(spec.horizon(), GramState(spec.dim())) {}

OnlinePlan& OnlineLearner::Plan() {
  if (plan_) return *plan_;
  const int k = episodes_done_ + 1;
  const int horizon = view_.horizon();
  OnlinePlan plan(view_, k);
  std::vector<double> targets;
  for (int h = horizon - 1; h >= 0; --h) {
    const GramState& gram = grams_[h];
    RequireHistory(gram, k, h);
    targets.clear();
    for (const Sample& s : gram.history())
      targets.push_back(s.reward + plan.Value(h + 1, s.next_state));
    plan.params_[h] =
        MakeParams(gram.RidgeSolve(targets), gram, +1, beta_, horizon, k);
    plan.coefficient_ratio_ =
        std::max(plan.coefficient_ratio_, CoefficientRatio(plan.params_[h]));
  }
  plan_.emplace(std::move(plan));
  return *plan_;
}

EpisodeRecord OnlineLearner::RunEpisode(Environment& env, Opponent& opponent,
                                        Rng& rng) {
  OnlinePlan& plan = Plan();
  const int horizon = view_.horizon();
  const int n = view_.num_actions();
  EpisodeRecord record;
  record.k = plan.k();
  record.steps.reserve(horizon);
  opponent.BeginEpisode(
      plan.k(), opponent.WantsLearnerPolicy() ? plan.Policy() : MarkovPolicy{});
  int x = env.Reset();
  record.upper_value = plan.Value(0, x);
  record.coefficient_ratio = plan.coefficient_ratio();
  for (int h = 0; h < horizon; ++h) {
    const int a = rng.Categorical(AsSpan(plan.Equilibrium(h, x).row));
    const int b = opponent.Act({plan.k(), h, x, episodes_});
    Require(b >= 0 && b < n, ErrorKind::kInput,
            "opponent returned invalid action " + std::to_string(b));
    const Transition t = env.Step(h, x, a, b);
    record.steps.push_back({x, a, b, t.reward});
    x = t.next_state;
  }
  record.final_state = x;
  for (int h = 0; h < horizon; ++h) {
    const StepRecord& s = record.steps[h];
    const int next = h + 1 < horizon ? record.steps[h + 1].x : x;
    grams_[h].Update(view_.Phi(s.x, s.a, s.b), next, s.reward);
  }
  plan_.reset();
  ++episodes_done_;
  episodes_.push_back(record);
  return record;
}

// ---------------------------------------------------------------------------

int FindMax(const TurnFeatureView& view, const QParams& q, int x, double eps) {
  const QParams rounded = RoundQParams(q, eps);
  int best = 0;
  double best_value = EvalQ(rounded, view.Phi(x, 0));
  for (int a = 1; a < view.num_actions(); ++a) {
    const double value = EvalQ(rounded, view.Phi(x, a));
    if (value > best_value) {
      best = a;
      best_value = value;
    }
  }
  return best;
}

int FindMin(const TurnFeatureView& view, const QParams& q, int x, double eps) {
  return FindMax(view, Negate(q), x, eps);
}

TurnOfflinePlan::TurnOfflinePlan(const TurnFeatureView& view, int k,
                                 double eps_net)
    : view_(view),
      k_(k),
      eps_net_(eps_net),
      upper_(view.horizon()),
      lower_(view.horizon()),
      action_(view.horizon(), std::vector<int>(view.num_states(), -1)) {}

int TurnOfflinePlan::Action(int h, int x) {
  Require(h >= 0 && h < view_.horizon() && x >= 0 &&
              x < view_.num_states(),
          ErrorKind::kInput, "plan lookup out of range");
  int& slot = action_[h][x];
  if (slot < 0) {
    slot = view_.owner(x) == 1 ? FindMax(view_, upper_[h], x, eps_net_)
                                : FindMin(view_, lower_[h], x, eps_net_);
  }
  return slot;
}

double TurnOfflinePlan::UpperValue(int h, int x) {
  if (h == view_.horizon()) return 0.0;
  return EvalQ(upper_[h], view_.Phi(x, Action(h, x)));
}

double TurnOfflinePlan::LowerValue(int h, int x) {
  if (h == view_.horizon()) return 0.0;
  return EvalQ(lower_[h], view_.Phi(x, Action(h, x)));
}

std::pair<MarkovPolicy, MarkovPolicy> TurnOfflinePlan::Policies() {
  const int n = view_.num_actions();
  MarkovPolicy pi(view_.horizon()), nu(view_.horizon());
  for (int h = 0; h < view_.horizon(); ++h) {
    for (int x = 0; x < view_.num_states(); ++x) {
      const int action = Action(h, x);
      const bool mine = view_.owner(x) == 1;
      pi[h].push_back(PointMass(n, mine ? action : 0));
      nu[h].push_back(PointMass(n, mine ? 0 : action));
    }
  }
  return {std::move(pi), std::move(nu)};
}

TurnOfflineLearner::TurnOfflineLearner(const TurnSpec& spec,
                                       LearnerConfig config)
    : view_(spec),
      config_(config),
      beta_(BonusBeta(spec.dim, spec.horizon, config.episodes, config.c,
                      config.p)),
      eps_net_(NetAccuracy(config.episodes, spec.horizon)),
      grams_(spec.horizon, GramState(spec.dim)) {}

TurnOfflinePlan& TurnOfflineLearner::Plan() {
  if (plan_) return *plan_;
  const int k = episodes_done_ + 1;
  const int horizon = view_.horizon();
  TurnOfflinePlan plan(view_, k, eps_net_);
  std::vector<double> upper_targets, lower_targets;
  for (int h = horizon - 1; h >= 0; --h) {
    const GramState& gram = grams_[h];
    RequireHistory(gram, k, h);
    upper_targets.clear();
    lower_targets.clear();
    for (const Sample& s : gram.history()) {
      upper_targets.push_back(s.reward + plan.UpperValue(h + 1, s.next_state));
      lower_targets.push_back(s.reward + plan.LowerValue(h + 1, s.next_state));
    }
    plan.upper_[h] = MakeParams(gram.RidgeSolve(upper_targets), gram, +1,
                                beta_, horizon, k);
    plan.lower_[h] = MakeParams(gram.RidgeSolve(lower_targets), gram, -1,
                                beta_, horizon, k);
    plan.coefficient_ratio_ =
        std::max({plan.coefficient_ratio_, CoefficientRatio(plan.upper_[h]),
                  CoefficientRatio(plan.lower_[h])});
  }
  plan_.emplace(std::move(plan));
  return *plan_;
}

EpisodeRecord TurnOfflineLearner::RunEpisode(Environment& env) {
  TurnOfflinePlan& plan = Plan();
  const int horizon = view_.horizon();
  EpisodeRecord record;
  record.k = plan.k();
  record.steps.reserve(horizon);
  int x = env.Reset();
  record.upper_value = plan.UpperValue(0, x);
  record.lower_value = plan.LowerValue(0, x);
  record.coefficient_ratio = plan.coefficient_ratio();
  std::vector<int> active(horizon);
  for (int h = 0; h < horizon; ++h) {
    const int action = plan.Action(h, x);
    const bool mine = view_.owner(x) == 1;
    const int a = mine ? action : 0;
    const int b = mine ? 0 : action;
    const Transition t = env.Step(h, x, a, b);
    record.steps.push_back({x, a, b, t.reward});
    active[h] = action;
    x = t.next_state;
  }
  record.final_state = x;
  for (int h = 0; h < horizon; ++h) {
    const StepRecord& s = record.steps[h];
    const int next = h + 1 < horizon ? record.steps[h + 1].x : x;
    grams_[h].Update(view_.Phi(s.x, active[h]), next, s.reward);
  }
  plan_.reset();
  ++episodes_done_;
  return record;
}

TurnOnlinePlan::TurnOnlinePlan(const TurnFeatureView& view, int k)
    : view_(view), k_(k), params_(view.horizon()) {}

int TurnOnlinePlan::Action(int h, int x) const {
  const bool maximize = view_.owner(x) == 1;
  int best = 0;
  double best_value = EvalQ(params_.at(h), view_.Phi(x, 0));
  for (int a = 1; a < view_.num_actions(); ++a) {
    const double value = EvalQ(params_[h], view_.Phi(x, a));
    if (maximize ? value > best_value : value < best_value) {
      best = a;
      best_value = value;
    }
  }
  return best;
}

double TurnOnlinePlan::Value(int h, int x) const {
  if (h == view_.horizon()) return 0.0;
  return EvalQ(params_.at(h), view_.Phi(x, Action(h, x)));
}

MarkovPolicy TurnOnlinePlan::Policy() const {
  const int n = view_.num_actions();
  MarkovPolicy pi(view_.horizon());
  for (int h = 0; h < view_.horizon(); ++h) {
    for (int x = 0; x < view_.num_states(); ++x) {
      pi[h].push_back(PointMass(n, view_.owner(x) == 1 ? Action(h, x) : 0));
    }
  }
  return pi;
}

TurnOnlineLearner::TurnOnlineLearner(const TurnSpec& spec,
                                     LearnerConfig config)
    : view_(spec),
      config_(config),
      beta_(BonusBeta(spec.dim, spec.horizon, config.episodes, config.c,
                      config.p)),
      grams_(spec.horizon, GramState(spec.dim)) {}

TurnOnlinePlan& TurnOnlineLearner::Plan() {
  if (plan_) return *plan_;
  const int k = episodes_done_ + 1;
  const int horizon = view_.horizon();
  TurnOnlinePlan plan(view_, k);
  std::vector<double> targets;
  for (int h = horizon - 1; h >= 0; --h) {
    const GramState& gram = grams_[h];
    RequireHistory(gram, k, h);
    targets.clear();
    for (const Sample& s : gram.history())
      targets.push_back(s.reward + plan.Value(h + 1, s.next_state));
    plan.params_[h] =
        MakeParams(gram.RidgeSolve(targets), gram, +1, beta_, horizon, k);
    plan.coefficient_ratio_ =
        std::max(plan.coefficient_ratio_, CoefficientRatio(plan.params_[h]));
  }
  plan_.emplace(std::move(plan));
  return *plan_;
}

EpisodeRecord TurnOnlineLearner::RunEpisode(Environment& env,
                                            Opponent& opponent) {
  TurnOnlinePlan& plan = Plan();
  const int horizon = view_.horizon();
  const int n = view_.num_actions();
  EpisodeRecord record;
  record.k = plan.k();
  record.steps.reserve(horizon);
  opponent.BeginEpisode(
      plan.k(), opponent.WantsLearnerPolicy() ? plan.Policy() : MarkovPolicy{});
  int x = env.Reset();
  record.upper_value = plan.Value(0, x);
  record.coefficient_ratio = plan.coefficient_ratio();
  std::vector<int> active(horizon);
  for (int h = 0; h < horizon; ++h) {
    int a = 0;
    int b = 0;
    if (view_.owner(x) == 1) {
      a = plan.Action(h, x);
      active[h] = a;
    } else {
      b = opponent.Act({plan.k(), h, x, episodes_});
      Require(b >= 0 && b < n, ErrorKind::kInput,
              "opponent returned invalid action " + std::to_string(b));
      active[h] = b;
    }
    const Transition t = env.Step(h, x, a, b);
    record.steps.push_back({x, a, b, t.reward});
    x = t.next_state;
  }
  record.final_state = x;
  for (int h = 0; h < horizon; ++h) {
    const StepRecord& s = record.steps[h];
    const int next = h + 1 < horizon ? record.steps[h + 1].x : x;
    grams_[h].Update(view_.Phi(s.x, active[h]), next, s.reward);
  }
  plan_.reset();
  ++episodes_done_;
  episodes_.push_back(record);
  return record;
}

}  // namespace omnivi
