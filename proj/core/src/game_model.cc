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

#include "omnivi/game_model.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "omnivi/errors.h"

namespace omnivi {

GameSpec::GameSpec(int dim, int horizon, int num_states, int num_actions,
                   std::vector<Vector> features, std::vector<Vector> theta,
                   std::vector<Matrix> mu, InitialState initial)
    : dim_(dim),
      horizon_(horizon),
      num_states_(num_states),
      num_actions_(num_actions),
      features_(std::move(features)),
      theta_(std::move(theta)),
      mu_(std::move(mu)),
      initial_(std::move(initial)) {
  Require(dim > 0 && horizon > 0 && num_states > 0 && num_actions > 0,
          ErrorKind::kInput, "game dimensions must be positive");
  Require(features_.size() ==
              static_cast<std::size_t>(num_states * num_actions * num_actions),
          ErrorKind::kInput, "feature table must have |S||A|^2 entries");
  Require(theta_.size() == static_cast<std::size_t>(horizon) &&
              mu_.size() == static_cast<std::size_t>(horizon),
          ErrorKind::kInput, "theta and mu need one entry per step");
  for (const auto& f : features_) {
    Require(f.size() == dim, ErrorKind::kInput, "feature length != d");
  }
  for (int h = 0; h < horizon; ++h) {
    Require(theta_[h].size() == dim, ErrorKind::kInput, "theta length != d");
    Require(mu_[h].rows() == dim && mu_[h].cols() == num_states,
            ErrorKind::kInput, "mu must be d x |S|");
  }
  set_initial_state(initial_);
}

void GameSpec::set_initial_state(InitialState initial) {
  if (initial.state) {
    Require(*initial.state >= 0 && *initial.state < num_states_,
            ErrorKind::kInput, "initial state out of range");
  } else {
    Require(initial.distribution.size() ==
                static_cast<std::size_t>(num_states_),
            ErrorKind::kInput, "initial distribution must cover S");
    double total = 0.0;
    for (double p : initial.distribution) {
      Require(p >= 0.0, ErrorKind::kInput, "negative initial probability");
      total += p;
    }
    Require(std::abs(total - 1.0) <= kSumTolerance, ErrorKind::kInput,
            "initial distribution must sum to 1");
  }
  initial_ = std::move(initial);
}

void GameSpec::CheckIndices(int h, int x, int a, int b) const {
  if (h < 0 || h >= horizon_ || x < 0 || x >= num_states_ || a < 0 ||
      a >= num_actions_ || b < 0 || b >= num_actions_) {
    std::ostringstream os;
    os << "index out of range: (h=" << h << ", x=" << x << ", a=" << a
       << ", b=" << b << ")";
    Fail(ErrorKind::kInput, os.str());
  }
}

const Vector& GameSpec::Feature(int x, int a, int b) const {
  CheckIndices(0, x, a, b);
  return features_[FeatureIndex(x, a, b)];
}

StepOutcome GameSpec::Query(int h, int x, int a, int b) const {
  CheckIndices(h, x, a, b);
  const Vector& phi = features_[FeatureIndex(x, a, b)];
  StepOutcome out;
  out.reward = phi.dot(theta_[h]);
  out.next_dist.resize(num_states_);
  double total = 0.0;
  bool clamped = false;
  for (int s = 0; s < num_states_; ++s) {
    double p = phi.dot(mu_[h].col(s));
    if (p < 0.0) {
      if (p < -kClampTolerance) {
        std::ostringstream os;
        os << "negative transition mass " << p << " at (h=" << h
           << ", x=" << x << ", a=" << a << ", b=" << b << ", x'=" << s << ")";
        Fail(ErrorKind::kModelValidity, os.str());
      }
      p = 0.0;
      clamped = true;
    }
    out.next_dist[s] = p;
    total += p;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os << "transition row sums to " << total << " at (h=" << h << ", x=" << x
       << ", a=" << a << ", b=" << b << ")";
    Fail(ErrorKind::kModelValidity, os.str());
  }
  if (clamped) {
    for (double& p : out.next_dist) p /= total;
  }
  if (std::abs(out.reward) > 1.0 + kSumTolerance) {
    std::ostringstream os;
    os << "reward " << out.reward << " outside [-1, 1] at (h=" << h
       << ", x=" << x << ", a=" << a << ", b=" << b << ")";
    Fail(ErrorKind::kModelValidity, os.str());
  }
  return out;
}

int GameSpec::SampleNext(int h, int x, int a, int b, Rng& rng) const {
  const StepOutcome out = Query(h, x, a, b);
  return rng.Categorical(out.next_dist);
}

int GameSpec::SampleInitial(Rng& rng) const {
  if (initial_.state) return *initial_.state;
  return rng.Categorical(initial_.distribution);
}

// --- tables -----------------------------------------------------------------

TabularTables::TabularTables(int horizon, int num_states, int num_actions)
    : horizon(horizon),
      num_states(num_states),
      num_actions(num_actions),
      reward(static_cast<std::size_t>(horizon) * num_states * num_actions *
                 num_actions,
             0.0),
      transition(reward.size() * num_states, 0.0) {}

std::size_t TabularTables::Offset(int h, int x, int a, int b) const {
  return ((static_cast<std::size_t>(h) * num_states + x) * num_actions + a) *
             num_actions +
         b;
}

double& TabularTables::Reward(int h, int x, int a, int b) {
  return reward.at(Offset(h, x, a, b));
}
double TabularTables::Reward(int h, int x, int a, int b) const {
  return reward.at(Offset(h, x, a, b));
}
double& TabularTables::Transition(int h, int x, int a, int b, int next) {
  return transition.at(Offset(h, x, a, b) * num_states + next);
}
double TabularTables::Transition(int h, int x, int a, int b, int next) const {
  return transition.at(Offset(h, x, a, b) * num_states + next);
}

TabularTurnTables::TabularTurnTables(int horizon, int num_states,
                                     int num_actions)
    : horizon(horizon),
      num_states(num_states),
      num_actions(num_actions),
      reward(static_cast<std::size_t>(horizon) * num_states * num_actions, 0.0),
      transition(reward.size() * num_states, 0.0),
      owner(num_states, 1) {}

std::size_t TabularTurnTables::Offset(int h, int x, int a) const {
  return (static_cast<std::size_t>(h) * num_states + x) * num_actions + a;
}

double& TabularTurnTables::Reward(int h, int x, int a) {
  return reward.at(Offset(h, x, a));
}
double TabularTurnTables::Reward(int h, int x, int a) const {
  return reward.at(Offset(h, x, a));
}
double& TabularTurnTables::Transition(int h, int x, int a, int next) {
  return transition.at(Offset(h, x, a) * num_states + next);
}
double TabularTurnTables::Transition(int h, int x, int a, int next) const {
  return transition.at(Offset(h, x, a) * num_states + next);
}

namespace {

void CheckStochasticRow(std::span<const double> row, const std::string& where) {
  double total = 0.0;
  for (double p : row) {
    Require(p >= 0.0, ErrorKind::kInput,
            "negative transition entry " + where);
    total += p;
  }
  Require(std::abs(total - 1.0) <= kSumTolerance, ErrorKind::kInput,
          "transition row does not sum to 1 " + where);
}

}  // namespace

GameSpec TabularGame(const TabularTables& t) {
  const int S = t.num_states;
  const int A = t.num_actions;
  const int H = t.horizon;
  Require(H > 0 && S > 0 && A > 0, ErrorKind::kInput,
          "tabular game dimensions must be positive");
  Require(t.reward.size() == static_cast<std::size_t>(H) * S * A * A &&
              t.transition.size() == t.reward.size() * S,
          ErrorKind::kInput, "tabular tables have the wrong size");
  const int d = S * A * A;
  std::vector<Vector> features(d, Vector::Zero(d));
  for (int i = 0; i < d; ++i) features[i](i) = 1.0;

  std::vector<Vector> theta(H, Vector::Zero(d));
  std::vector<Matrix> mu(H, Matrix::Zero(d, S));
  for (int h = 0; h < H; ++h) {
    for (int x = 0; x < S; ++x) {
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < A; ++b) {
          const int i = (x * A + a) * A + b;
          const double r = t.Reward(h, x, a, b);
          Require(std::isfinite(r) && r >= -1.0 && r <= 1.0,
                  ErrorKind::kInput, "reward entry outside [-1, 1]");
          theta[h](i) = r;
          std::vector<double> row(S);
          for (int s = 0; s < S; ++s) row[s] = t.Transition(h, x, a, b, s);
          CheckStochasticRow(row, "at tabular entry " + std::to_string(i));
          for (int s = 0; s < S; ++s) mu[h](i, s) = row[s];
        }
      }
    }
  }
  return GameSpec(d, H, S, A, std::move(features), std::move(theta),
                  std::move(mu));
}

TurnSpec TabularTurnGame(const TabularTurnTables& t) {
  const int S = t.num_states;
  const int A = t.num_actions;
  const int H = t.horizon;
  Require(H > 0 && S > 0 && A > 0, ErrorKind::kInput,
          "tabular game dimensions must be positive");
  Require(t.owner.size() == static_cast<std::size_t>(S), ErrorKind::kInput,
          "owner must cover every state");
  TurnSpec turn;
  turn.dim = S * A;
  turn.horizon = H;
  turn.num_states = S;
  turn.num_actions = A;
  turn.owner = t.owner;
  turn.features.assign(turn.dim, Vector::Zero(turn.dim));
  for (int i = 0; i < turn.dim; ++i) turn.features[i](i) = 1.0;
  turn.theta.assign(H, Vector::Zero(turn.dim));
  turn.mu.assign(H, Matrix::Zero(turn.dim, S));
  for (int h = 0; h < H; ++h) {
    for (int x = 0; x < S; ++x) {
      for (int a = 0; a < A; ++a) {
        const int i = x * A + a;
        const double r = t.Reward(h, x, a);
        Require(std::isfinite(r) && r >= -1.0 && r <= 1.0,
                ErrorKind::kInput, "reward entry outside [-1, 1]");
        turn.theta[h](i) = r;
        std::vector<double> row(S);
        for (int s = 0; s < S; ++s) row[s] = t.Transition(h, x, a, s);
        CheckStochasticRow(row, "at turn entry " + std::to_string(i));
        for (int s = 0; s < S; ++s) turn.mu[h](i, s) = row[s];
      }
    }
  }
  return turn;
}

namespace {

// Normalized exponential draws: a uniform point on the simplex.
Vector SimplexPoint(int n, Rng& rng) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = -std::log1p(-rng.Uniform());
  const double total = v.sum();
  if (total <= 0.0) {
    v.setConstant(1.0 / n);
  } else {
    v /= total;
  }
  return v;
}

}  // namespace

GameSpec RandomSimplexGame(int dim, int num_states, int num_actions,
                           int horizon, Rng& rng) {
  Require(dim >= 1 && num_states >= 1 && num_actions >= 1 && horizon >= 1,
          ErrorKind::kInput, "random game dimensions must be positive");
  std::vector<Vector> features;
  features.reserve(num_states * num_actions * num_actions);
  for (int i = 0; i < num_states * num_actions * num_actions; ++i) {
    features.push_back(SimplexPoint(dim, rng));
  }
  std::vector<Vector> theta;
  std::vector<Matrix> mu;
  for (int h = 0; h < horizon; ++h) {
    Vector th(dim);
    for (int i = 0; i < dim; ++i) th(i) = 2.0 * rng.Uniform() - 1.0;
    theta.push_back(std::move(th));
    Matrix m(dim, num_states);
    for (int i = 0; i < dim; ++i) m.row(i) = SimplexPoint(num_states, rng);
    mu.push_back(std::move(m));
  }
  return GameSpec(dim, horizon, num_states, num_actions, std::move(features),
                  std::move(theta), std::move(mu));
}

GameSpec EmbedTurnBased(const TurnSpec& turn) {
  const int S = turn.num_states;
  const int A = turn.num_actions;
  Require(turn.owner.size() == static_cast<std::size_t>(S), ErrorKind::kInput,
          "owner must cover every state");
  std::vector<Vector> features;
  features.reserve(S * A * A);
  for (int x = 0; x < S; ++x) {
    Require(turn.owner[x] == 1 || turn.owner[x] == 2, ErrorKind::kInput,
            "owner must be 1 or 2");
    for (int a = 0; a < A; ++a) {
      for (int b = 0; b < A; ++b) {
        features.push_back(turn.Feature(x, turn.owner[x] == 1 ? a : b));
      }
    }
  }
  return GameSpec(turn.dim, turn.horizon, S, A, std::move(features),
                  turn.theta, turn.mu, turn.initial);
}

// --- validation ---------------------------------------------------------------

std::string Violation::Describe() const {
  std::ostringstream os;
  os << invariant;
  if (h >= 0) os << " h=" << h;
  if (x >= 0) os << " x=" << x;
  if (a >= 0) os << " a=" << a;
  if (b >= 0) os << " b=" << b;
  os << " magnitude=" << magnitude;
  return os.str();
}

std::string ValidationReport::Describe() const {
  if (ok()) return "ok";
  std::ostringstream os;
  os << violations.size() << " violation(s)";
  for (const auto& v : violations) os << "\n  " << v.Describe();
  return os.str();
}

ValidationReport Validate(const GameSpec& spec) {
  ValidationReport report;
  const int d = spec.dim();
  const double sqrt_d = std::sqrt(static_cast<double>(d));
  const int S = spec.num_states();
  const int A = spec.num_actions();
  for (int x = 0; x < S; ++x) {
    for (int a = 0; a < A; ++a) {
      for (int b = 0; b < A; ++b) {
        const double n = spec.Feature(x, a, b).norm();
        if (n > 1.0 + kSumTolerance) {
          report.violations.push_back({"feature_norm", -1, x, a, b, n - 1.0});
        }
      }
    }
  }
  for (int h = 0; h < spec.horizon(); ++h) {
    const double tn = spec.theta(h).norm();
    if (tn > sqrt_d + kSumTolerance) {
      report.violations.push_back({"theta_norm", h, -1, -1, -1, tn - sqrt_d});
    }
    const double mn = spec.mu(h).rowwise().sum().norm();
    if (mn > sqrt_d + kSumTolerance) {
      report.violations.push_back({"mu_mass_norm", h, -1, -1, -1, mn - sqrt_d});
    }
    for (int x = 0; x < S; ++x) {
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < A; ++b) {
          const Vector& phi = spec.Feature(x, a, b);
          const double r = phi.dot(spec.theta(h));
          if (std::abs(r) > 1.0 + kSumTolerance) {
            report.violations.push_back(
                {"reward_bound", h, x, a, b, std::abs(r) - 1.0});
          }
          const Eigen::RowVectorXd row = phi.transpose() * spec.mu(h);
          const double most_negative = std::min(0.0, row.minCoeff());
          if (most_negative < -kClampTolerance) {
            report.violations.push_back(
                {"transition_negative", h, x, a, b, -most_negative});
          }
          const double deficit = 1.0 - row.sum();
          if (std::abs(deficit) > kSumTolerance) {
            report.violations.push_back(
                {"transition_sum", h, x, a, b, deficit});
          }
        }
      }
    }
  }
  return report;
}

ValidationReport Validate(const TurnSpec& turn) {
  ValidationReport report;
  if (turn.owner.size() != static_cast<std::size_t>(turn.num_states)) {
    report.violations.push_back({"owner_cover", -1, -1, -1, -1,
                                 static_cast<double>(turn.owner.size())});
    return report;
  }
  for (int x = 0; x < turn.num_states; ++x) {
    if (turn.owner[x] != 1 && turn.owner[x] != 2) {
      report.violations.push_back(
          {"owner_value", -1, x, -1, -1, static_cast<double>(turn.owner[x])});
    }
  }
  if (!report.ok()) return report;
  return Validate(EmbedTurnBased(turn));
}

}  // namespace omnivi
