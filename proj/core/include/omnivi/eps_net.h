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

#ifndef OMNIVI_EPS_NET_H_
#define OMNIVI_EPS_NET_H_

// Bonus-augmented Q functions
//
//   Q(phi) = clip_H( <w, phi> + rho * beta * sqrt(phi^T A phi) )
//
// and their on-the-fly rounding onto a fixed coordinate grid, which stands in
// for an explicit epsilon-net of the Q class. The net itself is never built.

#include <Eigen/Dense>

#include "omnivi/game_model.h"

namespace omnivi {

struct QParams {
  Vector w;
  Matrix ainv;  // A in the Q class; the learners pass Lambda^{-1}.
  int rho = 1;  // +1 for upper bounds, -1 for lower bounds
  double beta = 1.0;
  double horizon = 1.0;
  int k = 1;  // episode index; sets the w-ball radius 2 H sqrt(d k)

  int dim() const { return static_cast<int>(w.size()); }
  double WeightRadius() const;
};

// Throws kInput unless the parameters lie in the Q class (with 1e-9 slack).
void ValidateQParams(const QParams& q);

inline double ClipH(double u, double horizon) {
  return u > horizon ? horizon : (u < -horizon ? -horizon : u);
}

double EvalQ(const QParams& q, const Vector& phi);

// Q with the sign flipped: -Q is the Q-class member (-w, A, -rho).
QParams Negate(const QParams& q);

// Coordinatewise rounding toward zero onto the grid of step eps / sqrt(d):
// w~_i = floor(|w_i| / step) * step * sign(w_i). Requires ||w|| <= 1.
Vector RoundUnitVector(const Vector& w, double eps);

// Grid steps used by RoundQParams. Both are powers of two so that multiples
// of a step are exact doubles and rounding is idempotent.
struct GridSteps {
  double w_step = 0.0;  // coordinate step for w,  <= eps / (2 sqrt(d))
  double a_step = 0.0;  // entry step for A,       <= eps^2 / (4 beta^2 d)
};
GridSteps GridStepsFor(const QParams& q, double eps);

// Rounds (w, A) so that |EvalQ(rounded, phi) - EvalQ(q, phi)| <= eps for every
// ||phi|| <= 1. A is symmetrized before rounding, so the result is symmetric.
QParams RoundQParams(const QParams& q, double eps);

// True if every coordinate of w and entry of A is an integer multiple of the
// corresponding grid step.
bool OnGrid(const QParams& q, const GridSteps& steps);

// log of the epsilon-covering-number bound for the Q class:
// log 2 + d log(1 + 8 H sqrt(d k) / eps) + d^2 log(1 + 8 beta^2 sqrt(d) / eps^2).
double CoveringLogBound(int dim, double horizon, int k, double beta,
                        double eps);

}  // namespace omnivi

#endif  // OMNIVI_EPS_NET_H_
