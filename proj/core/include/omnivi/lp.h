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

#ifndef OMNIVI_LP_H_
#define OMNIVI_LP_H_

// Dense two-phase simplex for the small LPs behind the equilibrium solvers.
// Pivoting follows Bland's rule (lowest-index entering variable, lowest-index
// leaving basic variable on ratio ties), so results are deterministic.

#include <Eigen/Dense>

#include <vector>

namespace omnivi {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

// maximize c^T x  subject to  rows(A x) `relation` b,  x >= 0.
struct LinearProgram {
  Eigen::MatrixXd constraints;
  Eigen::VectorXd rhs;
  std::vector<Relation> relations;
  Eigen::VectorXd objective;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  Eigen::VectorXd x;
  // Dual value of each constraint row (sign convention of the maximization
  // problem: y >= 0 for <= rows at optimum).
  Eigen::VectorXd duals;
  double objective = 0.0;
  int pivots = 0;
};

LpSolution SolveLinearProgram(const LinearProgram& lp);

const char* ToString(LpStatus status);

}  // namespace omnivi

#endif  // OMNIVI_LP_H_
