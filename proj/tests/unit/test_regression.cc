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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "omnivi/errors.h"
#include "omnivi/regression.h"
#include "test_util.h"

namespace omnivi {
namespace {

using testing::RandomUnitBall;

TEST_SUITE("regression") {
  TEST_CASE("fresh state is the identity") {
    const GramState g(3);
    CHECK(g.gram() == Matrix::Identity(3, 3));
    CHECK(g.inverse() == Matrix::Identity(3, 3));
    CHECK(g.size() == 0);
    CHECK(g.RidgeSolve({}) == Vector::Zero(3));
  }

  TEST_CASE("one e1 update by hand") {
    GramState g(2);
    g.Update(Vector::Unit(2, 0), 0, 0.0);
    Matrix lambda(2, 2), inv(2, 2);
    lambda << 2, 0, 0, 1;
    inv << 0.5, 0, 0, 1;
    CHECK((g.gram() - lambda).norm() == 0.0);
    CHECK((g.inverse() - inv).norm() <= 1e-15);
    CHECK(g.WeightedNorm(Vector::Unit(2, 0)) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(GramState(2).WeightedNorm(Vector::Unit(2, 0)) == 1.0);
  }

  TEST_CASE("single-sample ridge gives t/2") {
    GramState g(1);
    g.Update(Vector::Ones(1), 0, 0.0);
    const std::vector<double> targets{0.8};
    CHECK(g.RidgeSolve(targets)(0) == doctest::Approx(0.4).epsilon(1e-15));
  }

  TEST_CASE("maintained inverse tracks direct inversion") {
    Rng rng(3);
    GramState g(4);
    for (int i = 0; i < 50; ++i) g.Update(RandomUnitBall(rng, 4), 0, 0.0);
    CHECK((g.inverse() - g.gram().inverse()).norm() <= 1e-8);
    const RegressionAudit audit = AuditGram(g, true);
    CHECK(audit.inverse_error <= 1e-8);
    CHECK(audit.gram_error <= 1e-12);
  }

  TEST_CASE("long runs cross the refresh period without drift") {
    Rng rng(5);
    GramState g(3);
    for (int i = 0; i < 2 * GramState::kRefreshPeriod + 17; ++i)
      g.Update(RandomUnitBall(rng, 3), 0, 0.0);
    CHECK(AuditGram(g, true).inverse_error <= 1e-8);
  }

  TEST_CASE("weighted norm never exceeds the Euclidean norm") {
    Rng rng(7);
    GramState g(5);
    for (int i = 0; i < 30; ++i) {
      g.Update(RandomUnitBall(rng, 5), 0, 0.0);
      const Vector phi = testing::RandomVector(rng, 5, -2.0, 2.0);
      CHECK(g.WeightedNorm(phi) <= phi.norm() + 1e-12);
    }
  }

  TEST_CASE("ridge matches an independent dense solve") {
    Rng rng(11);
    const int d = 4, n = 40;
    GramState g(d);
    Matrix phi(n, d);
    Vector y(n);
    for (int i = 0; i < n; ++i) {
      const Vector f = RandomUnitBall(rng, d);
      phi.row(i) = f.transpose();
      y(i) = 2.0 * rng.Uniform() - 1.0;
      g.Update(f, 0, 0.0);
    }
    const Matrix a = Matrix::Identity(d, d) + phi.transpose() * phi;
    const Vector direct = a.colPivHouseholderQr().solve(phi.transpose() * y);
    const std::vector<double> targets(y.data(), y.data() + n);
    CHECK((g.RidgeSolve(targets) - direct).norm() <= 1e-8);
    CHECK_THROWS_AS(g.RidgeSolve(std::vector<double>(n - 1, 0.0)), Error);
  }

  TEST_CASE("simple bound and elliptical potential") {
    Rng rng(13);
    const int d = 6;
    GramState g(d);
    for (int i = 0; i < 300; ++i) {
      g.Update(RandomUnitBall(rng, d), 0, 0.0);
      if (i % 25 == 0) {
        const RegressionAudit a = AuditGram(g, false);
        CHECK(a.SimpleBoundHolds(1e-8));
        CHECK(a.PotentialHolds(1e-8));
      }
    }
    // Naive recomputation of the simple-bound sum.
    const Matrix inv = g.gram().inverse();
    double sum = 0.0;
    for (const Sample& s : g.history()) sum += s.phi.dot(inv * s.phi);
    CHECK(sum <= d + 1e-8);
    CHECK(std::abs(AuditGram(g, false).simple_bound_sum - sum) <= 1e-8);
  }

  TEST_CASE("coefficient bound for bounded targets") {
    Rng rng(17);
    const int d = 3, horizon = 2;
    GramState g(d);
    std::vector<double> targets;
    for (int k = 1; k <= 200; ++k) {
      g.Update(RandomUnitBall(rng, d), 0, 0.0);
      targets.push_back((rng.Uniform() < 0.5 ? -1.0 : 1.0) * 2.0 * horizon);
      const double radius = 2.0 * horizon * std::sqrt(d * (k + 1.0));
      CHECK(g.RidgeSolve(targets).norm() <= radius);
    }
  }

  TEST_CASE("history stores samples in order") {
    GramState g(2);
    g.Update(Vector::Unit(2, 1), 3, 0.25);
    g.Update(Vector::Unit(2, 0), 1, -0.5);
    REQUIRE(g.size() == 2);
    CHECK(g.history()[0].next_state == 3);
    CHECK(g.history()[1].reward == -0.5);
    CHECK(g.potential_sum() == doctest::Approx(2.0));
  }

  TEST_CASE("features outside the unit ball are rejected") {
    GramState g(2);
    CHECK_THROWS_AS(g.Update(Vector::Constant(2, 1.0), 0, 0.0), Error);
  }
}

}  // namespace
}  // namespace omnivi
