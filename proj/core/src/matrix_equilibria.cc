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

#include "omnivi/matrix_equilibria.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "omnivi/errors.h"
#include "omnivi/lp.h"

namespace omnivi {
namespace {

void CheckPayoff(const Matrix& m, const char* name) {
  Require(m.rows() > 0 && m.cols() > 0, ErrorKind::kInput,
          std::string(name) + " is empty");
  Require(m.allFinite(), ErrorKind::kInput,
          std::string(name) + " has non-finite entries");
}

// Clamps roundoff negatives and renormalizes to unit mass.
template <typename Derived>
void Normalize(Eigen::MatrixBase<Derived>& v) {
  v = v.cwiseMax(0.0);
  const double total = v.sum();
  Require(total > 0.0, ErrorKind::kSolver, "equilibrium has zero mass");
  v /= total;
}

}  // namespace

bool IsDistribution(const Eigen::Ref<const Eigen::VectorXd>& probs) {
  if (probs.size() == 0) return false;
  if ((probs.array() < 0.0).any()) return false;
  return std::abs(probs.sum() - 1.0) <= kSumTolerance;
}

JointDistribution::JointDistribution(Matrix probs) : probs_(std::move(probs)) {
  Require(probs_.rows() > 0 && probs_.rows() == probs_.cols(),
          ErrorKind::kInput, "joint distribution must be square");
  Require((probs_.array() >= 0.0).all(), ErrorKind::kInput,
          "joint distribution has negative mass");
  Require(std::abs(probs_.sum() - 1.0) <= kSumTolerance, ErrorKind::kInput,
          "joint distribution does not sum to 1");
}

double JointDistribution::Expect(const Matrix& payoff) const {
  return probs_.cwiseProduct(payoff).sum();
}

ZeroSumSolution SolveZeroSum(const Matrix& payoff) {
  CheckPayoff(payoff, "payoff");
  const int rows = payoff.rows();
  const int cols = payoff.cols();

  // Column player's LP on the shifted game (all entries >= 1):
  //   maximize 1^T z  s.t.  M' z <= 1, z >= 0.
  // Its optimum is 1 / value(M') and the dual gives the row strategy.
  const double shift = 1.0 - payoff.minCoeff();
  LinearProgram lp;
  lp.constraints = payoff.array() + shift;
  lp.rhs = Eigen::VectorXd::Ones(rows);
  lp.relations.assign(rows, Relation::kLessEqual);
  lp.objective = Eigen::VectorXd::Ones(cols);
  const LpSolution sol = SolveLinearProgram(lp);
  if (sol.status != LpStatus::kOptimal) {
    Fail(ErrorKind::kSolver,
         std::string("zero-sum LP failed: ") + ToString(sol.status));
  }

  ZeroSumSolution out;
  out.col = sol.x;
  Normalize(out.col);
  out.row = sol.duals;
  Normalize(out.row);
  out.value = out.row.dot(payoff * out.col);
  return out;
}

MinimaxSlack PureResponseSlack(const Matrix& payoff,
                               const ZeroSumSolution& solution) {
  MinimaxSlack slack;
  slack.row_slack = (payoff * solution.col).maxCoeff() - solution.value;
  slack.col_slack =
      solution.value - (solution.row.transpose() * payoff).minCoeff();
  return slack;
}

JointDistribution SolveCce(const Matrix& u1, const Matrix& u2) {
  CheckPayoff(u1, "u1");
  CheckPayoff(u2, "u2");
  const int n = u1.rows();
  Require(u1.cols() == n && u2.rows() == n && u2.cols() == n,
          ErrorKind::kInput, "CCE payoffs must both be |A| x |A|");

  // Variables sigma(a, b) at index a * n + b.
  LinearProgram lp;
  lp.constraints = Eigen::MatrixXd::Zero(2 * n + 1, n * n);
  lp.rhs = Eigen::VectorXd::Zero(2 * n + 1);
  lp.relations.assign(2 * n + 1, Relation::kLessEqual);
  lp.objective.resize(n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const int j = a * n + b;
      lp.objective(j) = u1(a, b) - u2(a, b);
      // Row player deviating to `dev`: gain u1(dev, b) - u1(a, b) <= 0.
      for (int dev = 0; dev < n; ++dev) {
        lp.constraints(dev, j) = u1(dev, b) - u1(a, b);
      }
      // Column player deviating to `dev`: gain u2(a, b) - u2(a, dev) <= 0.
      for (int dev = 0; dev < n; ++dev) {
        lp.constraints(n + dev, j) = u2(a, b) - u2(a, dev);
      }
      lp.constraints(2 * n, j) = 1.0;
    }
  }
  lp.rhs(2 * n) = 1.0;
  lp.relations[2 * n] = Relation::kEqual;

  const LpSolution sol = SolveLinearProgram(lp);
  if (sol.status != LpStatus::kOptimal) {
    Fail(ErrorKind::kSolver,
         std::string("CCE LP failed: ") + ToString(sol.status));
  }
  Eigen::VectorXd flat = sol.x;
  Normalize(flat);
  Matrix probs(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) probs(a, b) = flat(a * n + b);
  }
  JointDistribution sigma(std::move(probs));
  const CceCheck check = VerifyCce(sigma, u1, u2, 1e-9);
  if (!check.ok) {
    std::ostringstream os;
    os << "CCE LP solution violates deviation constraints by "
       << check.max_violation << " (pivots=" << sol.pivots << ")";
    Fail(ErrorKind::kSolver, os.str());
  }
  return sigma;
}

CceCheck VerifyCce(const JointDistribution& sigma, const Matrix& u1,
                   const Matrix& u2, double tol) {
  const int n = sigma.num_actions();
  Require(u1.rows() == n && u1.cols() == n && u2.rows() == n && u2.cols() == n,
          ErrorKind::kInput, "payoff shape does not match sigma");
  double worst = 0.0;
  for (int dev = 0; dev < n; ++dev) {
    double gain1 = 0.0;
    double gain2 = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        gain1 += sigma(a, b) * (u1(dev, b) - u1(a, b));
        gain2 += sigma(a, b) * (u2(a, b) - u2(a, dev));
      }
    }
    worst = std::max({worst, gain1, gain2});
  }
  return CceCheck{worst <= tol, worst};
}

std::pair<MixedStrategy, MixedStrategy> Marginals(
    const JointDistribution& sigma) {
  return {sigma.probs().rowwise().sum(),
          sigma.probs().colwise().sum().transpose()};
}

InstabilityPair MakeInstabilityPair(double eps) {
  Require(eps > 0.0 && std::isfinite(eps), ErrorKind::kInput,
          "instability pair requires eps > 0");
  InstabilityPair pair;
  pair.original.u1.resize(2, 2);
  pair.original.u2.resize(2, 2);
  pair.perturbed.u1.resize(2, 2);
  pair.perturbed.u2.resize(2, 2);
  pair.original.u1 << 1.0 + eps, eps, 1.0, 0.0;
  pair.original.u2 << -1.0 - eps, -1.0, -eps, 0.0;
  pair.perturbed.u1 << 1.0 - eps, -eps, 1.0, 0.0;
  pair.perturbed.u2 << -1.0 + eps, -1.0, eps, 0.0;
  return pair;
}

}  // namespace omnivi
