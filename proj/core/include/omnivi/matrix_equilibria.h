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

#ifndef OMNIVI_MATRIX_EQUILIBRIA_H_
#define OMNIVI_MATRIX_EQUILIBRIA_H_

// Equilibria of finite two-player matrix games. Player 1 (rows) maximizes its
// payoff, player 2 (columns) minimizes its own.

#include <Eigen/Dense>

#include <utility>

#include "omnivi/game_model.h"

namespace omnivi {

// Joint distribution sigma(a, b) over action pairs.
class JointDistribution {
 public:
  JointDistribution() = default;
  // Validates nonnegativity and unit mass (1e-9).
  explicit JointDistribution(Matrix probs);

  const Matrix& probs() const { return probs_; }
  double operator()(int a, int b) const { return probs_(a, b); }
  int num_actions() const { return static_cast<int>(probs_.rows()); }

  // Expected value of `payoff` under sigma.
  double Expect(const Matrix& payoff) const;

 private:
  Matrix probs_;
};

struct ZeroSumSolution {
  double value = 0.0;
  MixedStrategy row;
  MixedStrategy col;
};

// Minimax solution of the zero-sum game where the row player receives
// payoff(a, b). Deterministic for identical input.
ZeroSumSolution SolveZeroSum(const Matrix& payoff);

// Largest gain from a pure deviation against the reported strategies:
// max_a (payoff col)_a - value and value - min_b (row^T payoff)_b.
struct MinimaxSlack {
  double row_slack = 0.0;
  double col_slack = 0.0;
};
MinimaxSlack PureResponseSlack(const Matrix& payoff,
                               const ZeroSumSolution& solution);

// Coarse correlated equilibrium of the general-sum game (u1 for the
// maximizing row player, u2 for the minimizing column player). Among all
// CCEs returns the one maximizing sum sigma * (u1 - u2), breaking ties by the
// simplex vertex reached under Bland's rule.
JointDistribution SolveCce(const Matrix& u1, const Matrix& u2);

struct CceCheck {
  bool ok = true;
  double max_violation = 0.0;
};

// Checks every unconditional unilateral deviation with additive slack `tol`.
CceCheck VerifyCce(const JointDistribution& sigma, const Matrix& u1,
                   const Matrix& u2, double tol);

std::pair<MixedStrategy, MixedStrategy> Marginals(
    const JointDistribution& sigma);

struct GamePair {
  Matrix u1;
  Matrix u2;
};

// Two 2x2 games at payoff distance 2*eps whose unique CCEs are the opposite
// corners, so their CCE values differ by at least 1.
struct InstabilityPair {
  GamePair original;
  GamePair perturbed;
};
InstabilityPair MakeInstabilityPair(double eps);

// Checks that `probs` is a probability vector within kSumTolerance.
bool IsDistribution(const Eigen::Ref<const Eigen::VectorXd>& probs);

}  // namespace omnivi

#endif  // OMNIVI_MATRIX_EQUILIBRIA_H_
