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

#include "omnivi/eps_net.h"

#include <cmath>
#include <sstream>

#include "omnivi/errors.h"

namespace omnivi {
namespace {

// floor(|value| / step) with a one-step correction so that exact multiples of
// `step` map back to themselves even when the division rounds down.
double GridCount(double magnitude, double step) {
  double n = std::floor(magnitude / step);
  if ((n + 1.0) * step <= magnitude) n += 1.0;
  if (n > 0.0 && n * step > magnitude) n -= 1.0;
  return n;
}

double RoundToward0(double value, double step) {
  if (value == 0.0) return 0.0;
  const double n = GridCount(std::abs(value), step);
  return std::copysign(n * step, value);
}

// Largest power of two <= bound.
double PowerOfTwoBelow(double bound) {
  int exponent = 0;
  std::frexp(bound, &exponent);  // bound = m * 2^exponent, m in [0.5, 1)
  return std::ldexp(1.0, exponent - 1);
}

}  // namespace

double QParams::WeightRadius() const {
  return 2.0 * horizon * std::sqrt(static_cast<double>(dim()) * k);
}

void ValidateQParams(const QParams& q) {
  const int d = q.dim();
  Require(d > 0, ErrorKind::kInput, "QParams needs a nonempty w");
  Require(q.ainv.rows() == d && q.ainv.cols() == d, ErrorKind::kInput,
          "QParams A must be d x d");
  Require(q.rho == 1 || q.rho == -1, ErrorKind::kInput, "rho must be +-1");
  Require(q.beta > 0.0 && q.horizon > 0.0 && q.k >= 1, ErrorKind::kInput,
          "QParams needs beta > 0, H > 0, k >= 1");
  Require(q.w.allFinite() && q.ainv.allFinite(), ErrorKind::kInput,
          "QParams has non-finite entries");
  if (q.w.norm() > q.WeightRadius() + 1e-9) {
    std::ostringstream os;
    os << "||w|| = " << q.w.norm() << " exceeds 2H sqrt(dk) = "
       << q.WeightRadius();
    Fail(ErrorKind::kInput, os.str());
  }
  if (q.ainv.norm() > std::sqrt(static_cast<double>(d)) + 1e-9) {
    std::ostringstream os;
    os << "||A||_F = " << q.ainv.norm() << " exceeds sqrt(d)";
    Fail(ErrorKind::kInput, os.str());
  }
}

double EvalQ(const QParams& q, const Vector& phi) {
  Require(phi.size() == q.dim(), ErrorKind::kInput, "feature length != d");
  double radicand = phi.dot(q.ainv * phi);
  if (radicand < 0.0) radicand = 0.0;
  return ClipH(q.w.dot(phi) + q.rho * q.beta * std::sqrt(radicand), q.horizon);
}

QParams Negate(const QParams& q) {
  QParams out = q;
  out.w = -q.w;
  out.rho = -q.rho;
  return out;
}

Vector RoundUnitVector(const Vector& w, double eps) {
  Require(eps > 0.0 && std::isfinite(eps), ErrorKind::kInput,
          "rounding accuracy must be positive");
  Require(w.size() > 0, ErrorKind::kInput, "empty vector");
  Require(w.norm() <= 1.0 + 1e-12, ErrorKind::kInput,
          "RoundUnitVector expects ||w|| <= 1; rescale first");
  const double step = eps / std::sqrt(static_cast<double>(w.size()));
  Vector out(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    out(i) = RoundToward0(w(i), step);
  }
  return out;
}

GridSteps GridStepsFor(const QParams& q, double eps) {
  Require(eps > 0.0 && std::isfinite(eps), ErrorKind::kInput,
          "rounding accuracy must be positive");
  const double d = q.dim();
  GridSteps steps;
  // ||w~ - w||_2 <= sqrt(d) * w_step <= eps / 2.
  steps.w_step = PowerOfTwoBelow(eps / (2.0 * std::sqrt(d)));
  // ||A~ - A||_F <= d * a_step <= eps^2 / (4 beta^2), so the bonus moves by at
  // most beta * sqrt(||A~ - A||_F) <= eps / 2.
  steps.a_step = PowerOfTwoBelow(eps * eps / (4.0 * q.beta * q.beta * d));
  return steps;
}

QParams RoundQParams(const QParams& q, double eps) {
  ValidateQParams(q);
  const GridSteps steps = GridStepsFor(q, eps);
  QParams out = q;
  for (Eigen::Index i = 0; i < q.w.size(); ++i) {
    out.w(i) = RoundToward0(q.w(i), steps.w_step);
  }
  const Matrix sym = 0.5 * (q.ainv + q.ainv.transpose());
  for (Eigen::Index r = 0; r < sym.rows(); ++r) {
    for (Eigen::Index c = 0; c < sym.cols(); ++c) {
      out.ainv(r, c) = RoundToward0(sym(r, c), steps.a_step);
    }
  }
  return out;
}

bool OnGrid(const QParams& q, const GridSteps& steps) {
  auto on = [](double v, double step) {
    const double n = v / step;  // exact: step is a power of two
    return n == std::trunc(n);
  };
  for (Eigen::Index i = 0; i < q.w.size(); ++i) {
    if (!on(q.w(i), steps.w_step)) return false;
  }
  for (Eigen::Index i = 0; i < q.ainv.size(); ++i) {
    if (!on(q.ainv.data()[i], steps.a_step)) return false;
  }
  return true;
}

double CoveringLogBound(int dim, double horizon, int k, double beta,
                        double eps) {
  Require(dim > 0 && horizon > 0.0 && k > 0 && beta > 0.0 && eps > 0.0,
          ErrorKind::kInput, "covering bound needs positive inputs");
  const double d = dim;
  const double w_term =
      d * std::log1p(8.0 * horizon * std::sqrt(d * k) / eps);
  const double a_term =
      d * d * std::log1p(8.0 * beta * beta * std::sqrt(d) / (eps * eps));
  return std::log(2.0) + w_term + a_term;
}

}  // namespace omnivi
