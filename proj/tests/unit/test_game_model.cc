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
#include "omnivi/game_model.h"
#include "omnivi/spec_io.h"
#include "test_util.h"

namespace omnivi {
namespace {

using testing::RandomTables;

bool HasInvariant(const ValidationReport& r, const std::string& name) {
  for (const Violation& v : r.violations)
    if (v.invariant == name) return true;
  return false;
}

GameSpec WithMu(const GameSpec& g, int h, const Matrix& mu) {
  std::vector<Vector> theta;
  std::vector<Matrix> mus;
  for (int s = 0; s < g.horizon(); ++s) {
    theta.push_back(g.theta(s));
    mus.push_back(s == h ? mu : g.mu(s));
  }
  return GameSpec(g.dim(), g.horizon(), g.num_states(), g.num_actions(),
                  g.features(), theta, mus, g.initial_state());
}

TEST_SUITE("game_model") {
  TEST_CASE("one-state one-action tabular game") {
    TabularTables t(1, 1, 1);
    t.Reward(0, 0, 0, 0) = 1.0;
    t.Transition(0, 0, 0, 0, 0) = 1.0;
    const GameSpec g = TabularGame(t);
    CHECK(g.dim() == 1);
    CHECK(g.Feature(0, 0, 0)(0) == 1.0);
    CHECK(g.theta(0)(0) == 1.0);
  }

  TEST_CASE("tabular round trip reproduces the tables exactly") {
    Rng rng(7);
    const TabularTables t = RandomTables(rng, 2, 2, 2);
    const GameSpec g = TabularGame(t);
    CHECK(g.dim() == 8);
    CHECK(Validate(g).ok());
    for (int h = 0; h < 2; ++h)
      for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            const StepOutcome out = g.Query(h, x, a, b);
            CHECK(out.reward == t.Reward(h, x, a, b));
            for (int y = 0; y < 2; ++y)
              CHECK(out.next_dist[y] == t.Transition(h, x, a, b, y));
          }
  }

  TEST_CASE("table entries outside their contract are input errors") {
    TabularTables t(1, 1, 1);
    t.Reward(0, 0, 0, 0) = 1.5;
    t.Transition(0, 0, 0, 0, 0) = 1.0;
    try {
      TabularGame(t);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kInput);
    }
    t.Reward(0, 0, 0, 0) = 0.0;
    t.Transition(0, 0, 0, 0, 0) = 0.9;
    CHECK_THROWS_AS(TabularGame(t), Error);
  }

  TEST_CASE("reward 0.5 table selects the stored row") {
    TabularTables t(1, 2, 1);
    for (int x = 0; x < 2; ++x) {
      t.Reward(0, x, 0, 0) = 0.5;
      t.Transition(0, x, 0, 0, 0) = 0.25;
      t.Transition(0, x, 0, 0, 1) = 0.75;
    }
    const StepOutcome out = TabularGame(t).Query(0, 1, 0, 0);
    CHECK(out.reward == 0.5);
    CHECK(out.next_dist == std::vector<double>{0.25, 0.75});
  }

  TEST_CASE("absorbing single-state linear game") {
    const GameSpec g(1, 1, 1, 1, {Vector::Ones(1)}, {Vector::Zero(1)},
                     {Matrix::Ones(1, 1)});
    const StepOutcome out = g.Query(0, 0, 0, 0);
    CHECK(out.reward == 0.0);
    CHECK(out.next_dist == std::vector<double>{1.0});
  }

  TEST_CASE("random simplex query matches straight-line evaluation") {
    Rng rng(11);
    const GameSpec g = RandomSimplexGame(5, 4, 3, 3, rng);
    for (int h = 0; h < 3; ++h)
      for (int x = 0; x < 4; ++x)
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) {
            const Vector& phi = g.Feature(x, a, b);
            double r = 0.0;
            for (int i = 0; i < 5; ++i) r += phi(i) * g.theta(h)(i);
            const StepOutcome out = g.Query(h, x, a, b);
            CHECK(out.reward == doctest::Approx(r).epsilon(1e-14));
            for (int y = 0; y < 4; ++y) {
              double p = 0.0;
              for (int i = 0; i < 5; ++i) p += phi(i) * g.mu(h)(i, y);
              CHECK(std::abs(out.next_dist[y] - p) <= 1e-14);
            }
          }
  }

  TEST_CASE("query is pure and rows are stochastic") {
    Rng rng(3);
    const GameSpec g = RandomSimplexGame(4, 3, 2, 2, rng);
    for (int h = 0; h < 2; ++h)
      for (int x = 0; x < 3; ++x)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            const StepOutcome o1 = g.Query(h, x, a, b);
            const StepOutcome o2 = g.Query(h, x, a, b);
            CHECK(o1.reward == o2.reward);
            CHECK(o1.next_dist == o2.next_dist);
            double sum = 0.0;
            for (double p : o1.next_dist) {
              CHECK(p >= 0.0);
              sum += p;
            }
            CHECK(std::abs(sum - 1.0) <= 1e-9);
          }
  }

  TEST_CASE("query rejects bad indices") {
    Rng rng(3);
    const GameSpec g = RandomSimplexGame(4, 3, 2, 2, rng);
    CHECK_THROWS_AS(g.Query(2, 0, 0, 0), Error);
    CHECK_THROWS_AS(g.Query(0, 3, 0, 0), Error);
    CHECK_THROWS_AS(g.Query(0, 0, -1, 0), Error);
  }

  TEST_CASE("tiny negative mass is clamped, larger negatives are invalid") {
    const Vector phi = Vector::Ones(1);
    Matrix mu(1, 2);
    mu << -5e-13, 1.0 + 5e-13;
    const GameSpec g(1, 1, 2, 1, {phi, phi}, {Vector::Zero(1)}, {mu});
    const StepOutcome out = g.Query(0, 0, 0, 0);
    CHECK(out.next_dist[0] == 0.0);
    CHECK(out.next_dist[1] == 1.0);
    Matrix bad(1, 2);
    bad << -1e-6, 1.0 + 1e-6;
    const GameSpec g2(1, 1, 2, 1, {phi, phi}, {Vector::Zero(1)}, {bad});
    try {
      g2.Query(0, 0, 0, 0);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kModelValidity);
    }
  }

  TEST_CASE("sample_next frequencies and determinism") {
    TabularTables t(1, 2, 1);
    for (int x = 0; x < 2; ++x) {
      t.Transition(0, x, 0, 0, 0) = 0.5;
      t.Transition(0, x, 0, 0, 1) = 0.5;
    }
    const GameSpec g = TabularGame(t);
    Rng rng(123);
    int zeros = 0;
    for (int i = 0; i < 10000; ++i) zeros += g.SampleNext(0, 0, 0, 0, rng) == 0;
    CHECK(std::abs(zeros / 10000.0 - 0.5) <= 0.02);

    Rng r1(99), r2(99);
    for (int i = 0; i < 100; ++i)
      CHECK(g.SampleNext(0, 1, 0, 0, r1) == g.SampleNext(0, 1, 0, 0, r2));
  }

  TEST_CASE("point-mass transition always lands on its state") {
    TabularTables t(1, 3, 1);
    for (int x = 0; x < 3; ++x) t.Transition(0, x, 0, 0, 2) = 1.0;
    const GameSpec g = TabularGame(t);
    Rng rng(5);
    for (int i = 0; i < 200; ++i) CHECK(g.SampleNext(0, 0, 0, 0, rng) == 2);
  }

  TEST_CASE("fixed initial state consumes no randomness") {
    Rng rng(5);
    const GameSpec g = RandomSimplexGame(3, 3, 2, 1, rng);
    Rng a(9), b(9);
    CHECK(g.SampleInitial(a) == 0);
    CHECK(a.NextRaw() == b.NextRaw());
  }

  TEST_CASE("initial distribution is sampled") {
    Rng rng(5);
    GameSpec g = RandomSimplexGame(3, 3, 2, 1, rng);
    g.set_initial_state(InitialState::Distribution({0.0, 0.0, 1.0}));
    for (int i = 0; i < 20; ++i) CHECK(g.SampleInitial(rng) == 2);
    CHECK_THROWS_AS(
        g.set_initial_state(InitialState::Distribution({0.5, 0.6, 0.0})),
        Error);
  }

  TEST_CASE("random simplex games always validate") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng rng(seed);
      const GameSpec g = RandomSimplexGame(6, 4, 3, 2, rng);
      const ValidationReport r = Validate(g);
      CHECK_MESSAGE(r.ok(), r.Describe());
      for (int h = 0; h < 2; ++h) CHECK(g.mu(h).minCoeff() >= 0.0);
    }
  }

  TEST_CASE("random simplex generation is deterministic") {
    Rng a(42), b(42);
    CHECK(DumpGameSpec(RandomSimplexGame(4, 3, 2, 2, a)) ==
          DumpGameSpec(RandomSimplexGame(4, 3, 2, 2, b)));
  }

  TEST_CASE("validate reports a short transition row with its deficit") {
    Rng rng(1);
    const GameSpec g = TabularGame(RandomTables(rng, 2, 2, 2));
    CHECK(Validate(g).ok());
    Matrix mu = g.mu(1);
    const int i = g.FeatureIndex(1, 0, 1);
    // Row (x=1, a=0, b=1) of step 1 loses 0.1 of its mass.
    Eigen::Index largest = 0;
    mu.row(i).maxCoeff(&largest);
    REQUIRE(mu(i, largest) >= 0.5);
    mu(i, largest) -= 0.1;
    const ValidationReport r = Validate(WithMu(g, 1, mu));
    REQUIRE(!r.ok());
    bool found = false;
    for (const Violation& v : r.violations) {
      if (v.invariant == "transition_sum") {
        found = true;
        CHECK(v.h == 1);
        CHECK(v.x == 1);
        CHECK(v.a == 0);
        CHECK(v.b == 1);
        CHECK(v.magnitude == doctest::Approx(0.1).epsilon(1e-12));
      }
    }
    CHECK(found);
  }

  TEST_CASE("validate flags scaled theta") {
    Rng rng(4);
    const GameSpec g = RandomSimplexGame(4, 3, 2, 2, rng);
    std::vector<Vector> theta;
    std::vector<Matrix> mu;
    for (int h = 0; h < 2; ++h) {
      theta.push_back(10.0 * g.theta(h));
      mu.push_back(g.mu(h));
    }
    const GameSpec scaled(g.dim(), 2, 3, 2, g.features(), theta, mu);
    const ValidationReport r = Validate(scaled);
    CHECK(!r.ok());
    CHECK((HasInvariant(r, "reward_bound") || HasInvariant(r, "theta_norm")));
  }

  TEST_CASE("embedding ignores the inactive player's action") {
    TabularTurnTables t(2, 3, 2);
    Rng rng(8);
    t.owner = {1, 2, 1};
    for (int h = 0; h < 2; ++h)
      for (int x = 0; x < 3; ++x)
        for (int a = 0; a < 2; ++a) {
          t.Reward(h, x, a) = 2.0 * rng.Uniform() - 1.0;
          const MixedStrategy row = testing::RandomDistribution(rng, 3);
          for (int y = 0; y < 3; ++y) t.Transition(h, x, a, y) = row(y);
        }
    const TurnSpec turn = TabularTurnGame(t);
    CHECK(turn.dim == 6);
    CHECK(Validate(turn).ok());
    const GameSpec g = EmbedTurnBased(turn);
    CHECK(Validate(g).ok());
    for (int h = 0; h < 2; ++h)
      for (int x = 0; x < 3; ++x)
        for (int act = 0; act < 2; ++act)
          for (int other = 0; other < 2; ++other) {
            const bool p1 = turn.owner[x] == 1;
            const StepOutcome o = p1 ? g.Query(h, x, act, other)
                                     : g.Query(h, x, other, act);
            const StepOutcome ref = p1 ? g.Query(h, x, act, 0)
                                       : g.Query(h, x, 0, act);
            CHECK(o.reward == ref.reward);
            CHECK(o.next_dist == ref.next_dist);
            CHECK(o.reward == t.Reward(h, x, act));
          }
  }

  TEST_CASE("turn validation rejects bad owners") {
    TabularTurnTables t(1, 1, 1);
    t.owner = {3};
    t.Transition(0, 0, 0, 0) = 1.0;
    CHECK(!Validate(TabularTurnGame(t)).ok());
  }

  TEST_CASE("rng substreams are distinct and reproducible") {
    Rng a = StreamFor(5, Stream::kEnvironment);
    Rng b = StreamFor(5, Stream::kEnvironment);
    Rng c = StreamFor(5, Stream::kLearner);
    const auto x = a.NextRaw();
    CHECK(x == b.NextRaw());
    CHECK(x != c.NextRaw());
    Rng u(1);
    for (int i = 0; i < 1000; ++i) {
      const double v = u.Uniform();
      CHECK(v >= 0.0);
      CHECK(v < 1.0);
    }
  }
}

}  // namespace
}  // namespace omnivi
