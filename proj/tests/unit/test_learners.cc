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
#include "omnivi/evaluation.h"
#include "omnivi/learners.h"
#include "test_util.h"

namespace omnivi {
namespace {

using testing::RandomTables;

GameSpec SmallTabular(std::uint64_t seed) {
  Rng rng(seed);
  return TabularGame(RandomTables(rng, 2, 2, 2));
}

TurnSpec AlternatingTurnGame(std::uint64_t seed, std::vector<int> owner) {
  Rng rng(seed);
  const int states = static_cast<int>(owner.size());
  TabularTurnTables t(3, states, 2);
  t.owner = std::move(owner);
  for (int h = 0; h < 3; ++h)
    for (int x = 0; x < states; ++x)
      for (int a = 0; a < 2; ++a) {
        t.Reward(h, x, a) = 2.0 * rng.Uniform() - 1.0;
        const MixedStrategy row = testing::RandomDistribution(rng, states);
        for (int y = 0; y < states; ++y) t.Transition(h, x, a, y) = row(y);
      }
  return TabularTurnGame(t);
}

// Replays a fixed list of actions, one per call.
class ReplayOpponent : public Opponent {
 public:
  explicit ReplayOpponent(std::vector<int> actions) : actions_(std::move(actions)) {}
  int Act(const OpponentContext&) override { return actions_.at(next_++); }

 private:
  std::vector<int> actions_;
  std::size_t next_ = 0;
};

class ConstantOpponent : public Opponent {
 public:
  explicit ConstantOpponent(int action) : action_(action) {}
  int Act(const OpponentContext& context) override {
    seen_past.push_back(static_cast<int>(context.past.size()));
    seen_k.push_back(context.k);
    return action_;
  }
  std::vector<int> seen_past;
  std::vector<int> seen_k;

 private:
  int action_;
};

TEST_SUITE("learners") {
  TEST_CASE("bonus and net accuracy formulas") {
    const double beta = BonusBeta(8, 2, 1000, 0.2, 0.05);
    CHECK(beta == doctest::Approx(0.2 * 8 * 2 *
                                  std::sqrt(std::log(2.0 * 8 * 2000 / 0.05)))
                      .epsilon(1e-15));
    CHECK(NetAccuracy(1000, 2) == 1.0 / 2000.0);
    CHECK_THROWS_AS(BonusBeta(8, 2, 10, 0.0, 0.05), Error);
    CHECK_THROWS_AS(BonusBeta(8, 2, 10, 1.0, 1.0), Error);
  }

  TEST_CASE("first offline episode has constant optimistic bounds") {
    const GameSpec g = SmallTabular(1);
    OfflineLearner learner(g, {10, 1.0, 0.05});
    REQUIRE(learner.beta() >= g.horizon());
    OfflinePlan& plan = learner.Plan();
    for (int h = 0; h < 2; ++h) {
      CHECK(plan.upper(h).w == Vector::Zero(8));
      for (int x = 0; x < 2; ++x) {
        CHECK(plan.UpperMatrix(h, x) == Matrix::Constant(2, 2, 2.0));
        CHECK(plan.LowerMatrix(h, x) == Matrix::Constant(2, 2, -2.0));
        CHECK(VerifyCce(FindCce(plan, h, x), plan.UpperMatrix(h, x),
                        plan.LowerMatrix(h, x), 2 * plan.eps_net())
                  .ok);
      }
    }
    Environment env(g, Rng(1));
    Rng rng(2);
    const EpisodeRecord r = learner.RunEpisode(env, rng);
    CHECK(r.upper_value - r.lower_value == 4.0);
    CHECK(r.steps.size() == 2);
  }

  TEST_CASE("scalar ridge closed form on a one-state one-action game") {
    TabularTables t(1, 1, 1);
    t.Reward(0, 0, 0, 0) = 0.6;
    t.Transition(0, 0, 0, 0, 0) = 1.0;
    const GameSpec g = TabularGame(t);
    OfflineLearner learner(g, {50, 0.01, 0.05});
    Environment env(g, Rng(1));
    Rng rng(2);
    for (int k = 1; k <= 20; ++k) {
      OfflinePlan& plan = learner.Plan();
      const double w = (k - 1) * 0.6 / k;
      CHECK(plan.upper(0).w(0) == doctest::Approx(w).epsilon(1e-14));
      const double expected = ClipH(w + learner.beta() / std::sqrt(k), 1.0);
      CHECK(plan.UpperMatrix(0, 0)(0, 0) ==
            doctest::Approx(expected).epsilon(1e-14));
      learner.RunEpisode(env, rng);
    }
  }

  TEST_CASE("find_cce is memoized, verified and consistent with the values") {
    Rng gen(3);
    const GameSpec g = RandomSimplexGame(5, 4, 3, 3, gen);
    OfflineLearner learner(g, {30, 0.05, 0.05});
    Environment env(g, Rng(4));
    Rng rng(5);
    for (int k = 1; k <= 30; ++k) {
      OfflinePlan& plan = learner.Plan();
      CHECK(plan.coefficient_ratio() <= 1.0);
      for (int h = 0; h < 3; ++h) {
        for (int x = 0; x < 4; ++x) {
          const JointDistribution& s = FindCce(plan, h, x);
          CHECK(&FindCce(plan, h, x) == &s);
          const Matrix up = plan.UpperMatrix(h, x);
          const Matrix lo = plan.LowerMatrix(h, x);
          CHECK(VerifyCce(s, up, lo, 2 * plan.eps_net()).ok);
          CHECK(plan.UpperValue(h, x) == s.Expect(up));
          CHECK(plan.LowerValue(h, x) == s.Expect(lo));
          CHECK(up.maxCoeff() <= 3.0);
          CHECK(lo.minCoeff() >= -3.0);
        }
      }
      learner.RunEpisode(env, rng);
      for (const GramState& gram : learner.grams()) CHECK(gram.size() == k);
    }
  }

  TEST_CASE("offline runs are reproducible") {
    const GameSpec g = SmallTabular(2);
    auto run = [&] {
      OfflineLearner learner(g, {40, 0.2, 0.05});
      Environment env(g, StreamFor(9, Stream::kEnvironment));
      Rng rng = StreamFor(9, Stream::kLearner);
      std::vector<double> trace;
      for (int k = 0; k < 40; ++k) {
        const EpisodeRecord r = learner.RunEpisode(env, rng);
        trace.push_back(r.upper_value);
        trace.push_back(r.lower_value);
        for (const StepRecord& s : r.steps) {
          trace.push_back(s.x);
          trace.push_back(s.a);
          trace.push_back(s.b);
        }
      }
      return trace;
    };
    CHECK(run() == run());
  }

  TEST_CASE("history mismatch is an internal-state error") {
    const GameSpec g = SmallTabular(3);
    OfflineLearner learner(g, {5, 1.0, 0.05});
    // Grams are owned by the learner; a fresh learner must plan k = 1.
    CHECK(learner.Plan().k() == 1);
    CHECK(learner.episodes_done() == 0);
  }

  TEST_CASE("first online episode values") {
    const GameSpec g = SmallTabular(4);
    for (double c : {1.0, 0.001}) {
      OnlineLearner learner(g, {10, c, 0.05});
      OnlinePlan& plan = learner.Plan();
      for (int x = 0; x < 2; ++x)
        CHECK(plan.Value(0, x) ==
              doctest::Approx(std::min(learner.beta(), 2.0)).epsilon(1e-12));
    }
  }

  TEST_CASE("online plan values are minimax values of the Q matrix") {
    const GameSpec g = SmallTabular(5);
    OnlineLearner learner(g, {30, 0.1, 0.05});
    Environment env(g, Rng(1));
    ConstantOpponent opponent(1);
    Rng rng(2);
    for (int k = 1; k <= 30; ++k) {
      OnlinePlan& plan = learner.Plan();
      for (int h = 0; h < 2; ++h)
        for (int x = 0; x < 2; ++x) {
          const Matrix q = plan.QMatrix(h, x);
          const ZeroSumSolution& s = plan.Equilibrium(h, x);
          CHECK(std::abs((s.row.transpose() * q).minCoeff() - s.value) <= 1e-8);
          CHECK(std::abs((q * s.col).maxCoeff() - s.value) <= 1e-8);
        }
      learner.RunEpisode(env, opponent, rng);
    }
    // The opponent saw exactly the completed episodes, never the current one.
    for (std::size_t i = 0; i < opponent.seen_k.size(); ++i)
      CHECK(opponent.seen_past[i] == opponent.seen_k[i] - 1);
  }

  TEST_CASE("online plans depend only on the history") {
    const GameSpec g = SmallTabular(6);
    const ExactModel model(g);
    OnlineLearner a(g, {25, 0.2, 0.05});
    OnlineLearner b(g, {25, 0.2, 0.05});
    Environment env_a(g, Rng(7)), env_b(g, Rng(7));
    Rng rng_a(8), rng_b(8);
    UniformOpponent uniform(2, 2, 2, Rng(9));
    std::vector<int> actions;
    for (int k = 0; k < 25; ++k) {
      const EpisodeRecord r = a.RunEpisode(env_a, uniform, rng_a);
      for (const StepRecord& s : r.steps) actions.push_back(s.b);
    }
    ReplayOpponent replay(actions);
    for (int k = 0; k < 25; ++k) b.RunEpisode(env_b, replay, rng_b);
    for (int h = 0; h < 2; ++h)
      CHECK(a.Plan().params(h).w == b.Plan().params(h).w);
  }

  TEST_CASE("invalid opponent actions are input errors") {
    const GameSpec g = SmallTabular(7);
    OnlineLearner learner(g, {5, 0.2, 0.05});
    Environment env(g, Rng(1));
    ConstantOpponent bad(2);
    Rng rng(2);
    try {
      learner.RunEpisode(env, bad, rng);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kInput);
    }
  }

  TEST_CASE("find_max and find_min") {
    const TurnSpec turn = AlternatingTurnGame(1, {1, 2, 1});
    const TurnFeatureView view(turn);
    QParams q;
    q.w = Vector::Zero(turn.dim);
    q.ainv = Matrix::Zero(turn.dim, turn.dim);
    q.beta = 1.0;
    q.horizon = 3.0;
    q.k = 1;
    CHECK(FindMax(view, q, 0, 0.01) == 0);
    CHECK(FindMin(view, q, 0, 0.01) == 0);

    const double eps = 0.01;
    q.w(1) = 3 * eps;  // phi(0, 1) = e_1 wins by a 3 eps margin
    CHECK(FindMax(view, q, 0, eps) == 1);
    CHECK(FindMin(view, q, 0, eps) == 0);

    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
      q.w = testing::RandomVector(rng, turn.dim);
      q.ainv = Matrix::Identity(turn.dim, turn.dim) * rng.Uniform();
      q.rho = rng.Uniform() < 0.5 ? 1 : -1;
      for (int x = 0; x < 3; ++x)
        CHECK(FindMin(view, q, x, eps) == FindMax(view, Negate(q), x, eps));
    }
  }

  TEST_CASE("turn learner matches the embedded simultaneous learner on episode 1") {
    const TurnSpec turn = AlternatingTurnGame(2, {1, 2, 1});
    const GameSpec embedded = EmbedTurnBased(turn);
    TurnOfflineLearner tl(turn, {20, 0.2, 0.05});
    OfflineLearner sl(embedded, {20, 0.2, 0.05});
    Environment env_t(embedded, Rng(5)), env_s(embedded, Rng(5));
    Rng rng(6);
    const EpisodeRecord rt = tl.RunEpisode(env_t);
    const EpisodeRecord rs = sl.RunEpisode(env_s, rng);
    for (int h = 0; h < 3; ++h) {
      REQUIRE(rt.steps[h].x == rs.steps[h].x);
      if (turn.owner[rt.steps[h].x] == 1)
        CHECK(rt.steps[h].a == rs.steps[h].a);
      else
        CHECK(rt.steps[h].b == rs.steps[h].b);
    }
    CHECK(rt.upper_value == rs.upper_value);
    CHECK(rt.lower_value == rs.lower_value);
  }

  TEST_CASE("turn plan actions agree with find_max / find_min") {
    const TurnSpec turn = AlternatingTurnGame(3, {1, 2, 1});
    const TurnFeatureView view(turn);
    TurnOfflineLearner learner(turn, {40, 0.2, 0.05});
    const GameSpec embedded = EmbedTurnBased(turn);
    Environment env(embedded, Rng(1));
    for (int k = 1; k <= 40; ++k) {
      TurnOfflinePlan& plan = learner.Plan();
      for (int h = 0; h < 3; ++h)
        for (int x = 0; x < 3; ++x) {
          const int expected =
              turn.owner[x] == 1
                  ? FindMax(view, plan.upper(h), x, learner.eps_net())
                  : FindMin(view, plan.lower(h), x, learner.eps_net());
          CHECK(plan.Action(h, x) == expected);
          CHECK(plan.UpperValue(h, x) ==
                EvalQ(plan.upper(h), view.Phi(x, expected)));
        }
      learner.RunEpisode(env);
    }
  }

  TEST_CASE("single-owner turn game: online turn learner equals greedy LSVI") {
    const TurnSpec turn = AlternatingTurnGame(4, {1, 1, 1});
    TurnOnlineLearner learner(turn, {30, 0.1, 0.05});
    const GameSpec embedded = EmbedTurnBased(turn);
    Environment env(embedded, Rng(2));
    ConstantOpponent unused(0);
    const TurnFeatureView view(turn);
    for (int k = 1; k <= 30; ++k) {
      TurnOnlinePlan& plan = learner.Plan();
      for (int h = 0; h < 3; ++h)
        for (int x = 0; x < 3; ++x) {
          const double q0 = EvalQ(plan.params(h), view.Phi(x, 0));
          const double q1 = EvalQ(plan.params(h), view.Phi(x, 1));
          CHECK(plan.Value(h, x) == std::max(q0, q1));
          CHECK(plan.Action(h, x) == (q1 > q0 ? 1 : 0));
        }
      learner.RunEpisode(env, unused);
    }
    CHECK(unused.seen_k.empty());
  }
}

}  // namespace
}  // namespace omnivi
