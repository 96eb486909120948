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

#include "omnivi/lp.h"

#include <cmath>
#include <limits>

#include "omnivi/errors.h"

namespace omnivi {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr double kFeasibilityTol = 1e-9;

class Tableau {
 public:
  Tableau(const LinearProgram& lp) : m_(lp.rhs.size()), n_(lp.objective.size()) {
    // Column layout: [original | one identity column per row | surplus
    // columns for >= rows | rhs].
    num_surplus_ = 0;
    row_sign_.assign(m_, 1.0);
    std::vector<Relation> rel = lp.relations;
    for (int i = 0; i < m_; ++i) {
      if (lp.rhs(i) < 0.0) {
        row_sign_[i] = -1.0;
        if (rel[i] == Relation::kLessEqual) {
          rel[i] = Relation::kGreaterEqual;
        } else if (rel[i] == Relation::kGreaterEqual) {
          rel[i] = Relation::kLessEqual;
        }
      }
      if (rel[i] == Relation::kGreaterEqual) ++num_surplus_;
    }
    cols_ = n_ + m_ + num_surplus_;
    t_ = Eigen::MatrixXd::Zero(m_, cols_ + 1);
    artificial_.assign(cols_, false);
    basis_.resize(m_);
    int surplus = n_ + m_;
    for (int i = 0; i < m_; ++i) {
      t_.row(i).head(n_) = row_sign_[i] * lp.constraints.row(i);
      t_(i, cols_) = row_sign_[i] * lp.rhs(i);
      t_(i, n_ + i) = 1.0;
      basis_[i] = n_ + i;
      if (rel[i] != Relation::kLessEqual) artificial_[n_ + i] = true;
      if (rel[i] == Relation::kGreaterEqual) t_(i, surplus++) = -1.0;
    }
    cost_ = Eigen::VectorXd::Zero(cols_);
  }

  // Returns false if the iteration limit was hit, sets `unbounded` when an
  // improving column has no positive entry.
  bool Optimize(const Eigen::VectorXd& cost, bool allow_artificial,
                bool& unbounded, int& pivots) {
    cost_ = cost;
    unbounded = false;
    const int limit = 100 * (m_ + cols_) + 1000;
    for (int iter = 0; iter < limit; ++iter) {
      int enter = -1;
      for (int j = 0; j < cols_; ++j) {
        if (!allow_artificial && artificial_[j]) continue;
        if (ReducedCost(j) > kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = t_(i, cols_) / a;
        const double tie = 1e-12 * (1.0 + std::abs(best));
        if (leave < 0 || ratio < best - tie) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + tie && basis_[i] < basis_[leave]) {
          leave = i;
        }
      }
      if (leave < 0) {
        unbounded = true;
        return true;
      }
      Pivot(leave, enter);
      ++pivots;
    }
    return false;
  }

  double ReducedCost(int j) const {
    double z = 0.0;
    for (int i = 0; i < m_; ++i) z += cost_(basis_[i]) * t_(i, j);
    return cost_(j) - z;
  }

  void Pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  // After phase one: move zero-level artificial variables out of the basis
  // where a non-artificial pivot exists.
  void DriveOutArtificials(int& pivots) {
    for (int i = 0; i < m_; ++i) {
      if (!artificial_[basis_[i]]) continue;
      for (int j = 0; j < cols_; ++j) {
        if (artificial_[j]) continue;
        if (std::abs(t_(i, j)) > kPivotTol) {
          Pivot(i, j);
          ++pivots;
          break;
        }
      }
    }
  }

  double ArtificialMass() const {
    double mass = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (artificial_[basis_[i]]) mass += std::abs(t_(i, cols_));
    }
    return mass;
  }

  Eigen::VectorXd Primal() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x(basis_[i]) = t_(i, cols_);
    }
    return x;
  }

  Eigen::VectorXd Duals() const {
    Eigen::VectorXd y(m_);
    for (int i = 0; i < m_; ++i) {
      // Column n_ + i started as e_i, so it now holds B^{-1} e_i.
      double z = 0.0;
      for (int r = 0; r < m_; ++r) z += cost_(basis_[r]) * t_(r, n_ + i);
      y(i) = row_sign_[i] * z;
    }
    return y;
  }

  int cols() const { return cols_; }
  int n() const { return n_; }
  bool artificial(int j) const { return artificial_[j]; }

 private:
  int m_;
  int n_;
  int cols_ = 0;
  int num_surplus_ = 0;
  Eigen::MatrixXd t_;
  Eigen::VectorXd cost_;
  std::vector<int> basis_;
  std::vector<bool> artificial_;
  std::vector<double> row_sign_;
};

}  // namespace

const char* ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration limit";
  }
  return "unknown";
}

LpSolution SolveLinearProgram(const LinearProgram& lp) {
  const int m = lp.rhs.size();
  const int n = lp.objective.size();
  Require(lp.constraints.rows() == m && lp.constraints.cols() == n &&
              lp.relations.size() == static_cast<std::size_t>(m),
          ErrorKind::kInput, "inconsistent linear program dimensions");
  Require(lp.constraints.allFinite() && lp.rhs.allFinite() &&
              lp.objective.allFinite(),
          ErrorKind::kInput, "linear program has non-finite data");

  Tableau tab(lp);
  LpSolution sol;
  bool unbounded = false;

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(tab.cols());
  bool any_artificial = false;
  for (int j = 0; j < tab.cols(); ++j) {
    if (tab.artificial(j)) {
      phase1(j) = -1.0;
      any_artificial = true;
    }
  }
  if (any_artificial) {
    if (!tab.Optimize(phase1, true, unbounded, sol.pivots)) {
      sol.status = LpStatus::kIterationLimit;
      return sol;
    }
    if (tab.ArtificialMass() > kFeasibilityTol) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    tab.DriveOutArtificials(sol.pivots);
  }

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(tab.cols());
  phase2.head(n) = lp.objective;
  if (!tab.Optimize(phase2, false, unbounded, sol.pivots)) {
    sol.status = LpStatus::kIterationLimit;
    return sol;
  }
  if (unbounded) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }
  sol.status = LpStatus::kOptimal;
  sol.x = tab.Primal();
  sol.duals = tab.Duals();
  sol.objective = lp.objective.dot(sol.x);
  return sol;
}

}  // namespace omnivi
