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

#include "omnivi/regression.h"

#include <cmath>
#include <sstream>

#include "omnivi/errors.h"

namespace omnivi {

GramState::GramState(int dim)
    : dim_(dim),
      gram_(Matrix::Identity(dim, dim)),
      inverse_(Matrix::Identity(dim, dim)) {
  Require(dim > 0, ErrorKind::kInput, "GramState dimension must be positive");
}

void GramState::Update(const Vector& phi, int next_state, double reward) {
  Require(phi.size() == dim_, ErrorKind::kInput, "feature length != d");
  const double norm = phi.norm();
  if (!(norm <= 1.0 + 1e-9)) {
    std::ostringstream os;
    os << "feature norm " << norm << " exceeds 1";
    Fail(ErrorKind::kInput, os.str());
  }
  const Vector u = inverse_ * phi;
  const double quad = phi.dot(u);
  potential_sum_ += quad;
  gram_.noalias() += phi * phi.transpose();
  inverse_.noalias() -= (u * u.transpose()) / (1.0 + quad);
  history_.push_back(Sample{phi, next_state, reward});
  if (history_.size() % kRefreshPeriod == 0) RefreshInverse();
}

void GramState::RefreshInverse() {
  Eigen::LLT<Matrix> llt(gram_);
  inverse_ = llt.solve(Matrix::Identity(dim_, dim_));
  inverse_ = 0.5 * (inverse_ + inverse_.transpose());
}

double GramState::WeightedNorm(const Vector& phi) const {
  Require(phi.size() == dim_, ErrorKind::kInput, "feature length != d");
  double radicand = phi.dot(inverse_ * phi);
  if (radicand < 0.0) {
    if (radicand < -1e-12) {
      std::ostringstream os;
      os << "negative radicand " << radicand << " in weighted norm";
      Fail(ErrorKind::kNumeric, os.str());
    }
    radicand = 0.0;
  }
  return std::sqrt(radicand);
}

Vector GramState::RidgeSolve(std::span<const double> targets) const {
  Require(targets.size() == history_.size(), ErrorKind::kInput,
          "targets are not aligned with the history");
  Vector rhs = Vector::Zero(dim_);
  for (std::size_t t = 0; t < history_.size(); ++t) {
    rhs.noalias() += history_[t].phi * targets[t];
  }
  return inverse_ * rhs;
}

RegressionAudit AuditGram(const GramState& state, bool with_inverse) {
  RegressionAudit audit;
  audit.dim = state.dim();
  audit.samples = state.size();
  audit.potential_sum = state.potential_sum();

  Matrix rebuilt = Matrix::Identity(state.dim(), state.dim());
  for (const Sample& s : state.history()) {
    rebuilt.noalias() += s.phi * s.phi.transpose();
  }
  audit.gram_error = (rebuilt - state.gram()).norm();

  Eigen::LLT<Matrix> llt(rebuilt);
  const Matrix& lower = llt.matrixL();
  audit.log_det_ratio = 2.0 * lower.diagonal().array().log().sum();
  for (const Sample& s : state.history()) {
    audit.simple_bound_sum += s.phi.dot(llt.solve(s.phi));
  }
  if (with_inverse) {
    const Matrix direct = rebuilt.inverse();
    audit.inverse_error = (direct - state.inverse()).norm();
  }
  return audit;
}

}  // namespace omnivi
