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

#ifndef OMNIVI_REGRESSION_H_
#define OMNIVI_REGRESSION_H_

// Per-step regularized least squares: Lambda = I + sum phi phi^T with a
// maintained inverse, bonus norms and ridge solves over the step history.

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "omnivi/game_model.h"

namespace omnivi {

struct Sample {
  Vector phi;
  int next_state = 0;
  double reward = 0.0;
};

class GramState {
 public:
  // The inverse is rebuilt from scratch every this many updates.
  static constexpr int kRefreshPeriod = 512;

  explicit GramState(int dim);

  // Appends (phi, next_state, reward) and applies the Sherman-Morrison
  // update. Requires ||phi|| <= 1 + 1e-9.
  void Update(const Vector& phi, int next_state, double reward);

  // sqrt(phi^T Lambda^{-1} phi), without the bonus scale.
  double WeightedNorm(const Vector& phi) const;

  // Lambda^{-1} sum_t phi_t * targets[t]; targets align with history().
  Vector RidgeSolve(std::span<const double> targets) const;

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(history_.size()); }
  const Matrix& gram() const { return gram_; }
  const Matrix& inverse() const { return inverse_; }
  const std::vector<Sample>& history() const { return history_; }

  // Running sum of phi_j^T Lambda_{j-1}^{-1} phi_j, each term taken just
  // before sample j was added.
  double potential_sum() const { return potential_sum_; }

 private:
  void RefreshInverse();

  int dim_;
  Matrix gram_;
  Matrix inverse_;
  std::vector<Sample> history_;
  double potential_sum_ = 0.0;
};

// Residuals of the least-squares invariants, recomputed independently of the
// maintained inverse.
struct RegressionAudit {
  int dim = 0;
  int samples = 0;
  double simple_bound_sum = 0.0;   // sum_i phi_i^T Lambda^{-1} phi_i  (<= d)
  double potential_sum = 0.0;      // sum_j phi_j^T Lambda_{j-1}^{-1} phi_j
  double log_det_ratio = 0.0;      // log det Lambda - log det I
  double inverse_error = 0.0;      // ||maintained - direct inverse||_F
  double gram_error = 0.0;         // ||Lambda - (I + sum phi phi^T)||_F

  bool SimpleBoundHolds(double tol) const {
    return simple_bound_sum <= dim + tol;
  }
  bool PotentialHolds(double tol) const {
    return potential_sum <= 2.0 * log_det_ratio + tol &&
           log_det_ratio <= potential_sum + tol;
  }
};

// `with_inverse` adds the O(d^3) direct inversion.
RegressionAudit AuditGram(const GramState& state, bool with_inverse);

}  // namespace omnivi

#endif  // OMNIVI_REGRESSION_H_
