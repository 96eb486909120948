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
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "omnivi/errors.h"
#include "omnivi/harness.h"
#include "omnivi/spec_io.h"
#include "test_util.h"

namespace omnivi {
namespace {

const std::string kConfigs = OMNIVI_SOURCE_DIR "/configs";
const std::string kData = OMNIVI_SOURCE_DIR "/tests/data";

ExperimentConfig SmallConfig(Mode mode, int episodes) {
  ExperimentConfig c;
  c.mode = mode;
  c.game_path = kConfigs + "/games/" +
                (mode == Mode::kTurnOffline || mode == Mode::kTurnOnline
                     ? "turn_3state_h3.json"
                     : "tabular_2x2_h2.json");
  c.episodes = episodes;
  c.c = 0.2;
  c.seed = 7;
  return c;
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

ErrorKind KindOf(const std::string& text) {
  try {
    ValidateConfig(ParseConfig(text, kConfigs, "test"));
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kInternalState;
}

TEST_SUITE("harness") {
  TEST_CASE("config errors") {
    const std::string game = R"("game": "games/tabular_2x2_h2.json")";
    CHECK(KindOf("{" + game + R"(, "K": 0})") == ErrorKind::kConfig);
    CHECK(KindOf("{" + game + R"(, "c": -1})") == ErrorKind::kConfig);
    CHECK(KindOf("{" + game + R"(, "p": 1.5})") == ErrorKind::kConfig);
    CHECK(KindOf("{" + game + R"(, "mode": "sideways"})") == ErrorKind::kConfig);
    CHECK(KindOf("{" + game + R"(, "bogus": 1})") == ErrorKind::kConfig);
    CHECK(KindOf(R"({"K": "ten"})") == ErrorKind::kConfig);
    CHECK(KindOf("not json") == ErrorKind::kConfig);
    CHECK(KindOf(R"({"mode": "offline"})") == ErrorKind::kConfig);
    const ExperimentConfig ok =
        ParseConfig("{" + game + R"(, "K": 3, "opponent": "best_response"})",
                    kConfigs, "test");
    CHECK_NOTHROW(ValidateConfig(ok));
    CHECK(ok.opponent == OpponentKind::kBestResponse);
    CHECK(ok.game_path == kConfigs + "/games/tabular_2x2_h2.json");
  }

  TEST_CASE("config round trip") {
    const ExperimentConfig a = LoadConfig(kConfigs + "/offline_acceptance.json");
    const ExperimentConfig b = ParseConfig(ConfigToJson(a), "", "echo");
    CHECK(ConfigToJson(a) == ConfigToJson(b));
    CHECK(b.episodes == 1000);
    CHECK(b.checkpoints == std::vector<int>{250, 500, 1000});
  }

  TEST_CASE("first offline episode has width 2H") {
    ExperimentConfig c = SmallConfig(Mode::kOffline, 1);
    c.c = 1.0;
    const RunOutput out = Run(c);
    REQUIRE(out.metrics.size() == 1);
    const EpisodeMetrics& m = out.metrics.episodes()[0];
    CHECK(m.ucb - *m.lcb == 4.0);
    CHECK(*out.k0 == 1);
  }

  TEST_CASE("runs are deterministic and well formed") {
    for (Mode mode :
         {Mode::kOffline, Mode::kOnline, Mode::kTurnOffline, Mode::kTurnOnline}) {
      CAPTURE(ToString(mode));
      const ExperimentConfig c = SmallConfig(mode, 12);
      const RunOutput a = Run(c);
      const RunOutput b = Run(c);
      const std::string csv = FormatCsv(a);
      CHECK(csv == FormatCsv(b));
      const std::vector<std::string> lines = Lines(csv);
      REQUIRE(lines.size() == 13);
      CHECK(lines[0] == CsvHeader(mode));
      for (std::size_t i = 1; i < lines.size(); ++i)
        CHECK(lines[i].rfind(std::to_string(i) + ",", 0) == 0);
      CHECK(a.diagnostics.episodes == 12);
      CHECK(a.diagnostics.audits == 12 * a.horizon);
      CHECK(a.diagnostics.max_simple_bound_excess <= 1e-9);
      CHECK(a.diagnostics.max_potential_excess <= 1e-9);
      CHECK(a.diagnostics.max_coefficient_ratio <= 1.0);
    }
  }

  TEST_CASE("different seeds give different trajectories") {
    ExperimentConfig c = SmallConfig(Mode::kOffline, 20);
    auto states = [](const RunOutput& out) {
      std::vector<int> xs;
      for (const EpisodeRecord& r : out.records)
        for (const StepRecord& s : r.steps) xs.push_back(s.x);
      return xs;
    };
    const std::vector<int> a = states(Run(c));
    c.seed = 8;
    CHECK(a != states(Run(c)));
  }

  TEST_CASE("summary agrees with the metrics") {
    const RunOutput out = Run(SmallConfig(Mode::kOffline, 30));
    double sum = 0.0;
    for (const EpisodeMetrics& m : out.metrics.episodes()) sum += *m.gap;
    CHECK(*out.TotalGap() == doctest::Approx(sum).epsilon(1e-12));
    CHECK(*out.TotalGap() == *out.metrics.cum_gap().back());
    CHECK(*out.CumulativeAt(30) == *out.TotalGap());

    int argmin = 1;
    double best = 1e300;
    for (const EpisodeMetrics& m : out.metrics.episodes())
      if (m.ucb - *m.lcb < best) {
        best = m.ucb - *m.lcb;
        argmin = m.k;
      }
    CHECK(*out.k0 == argmin);
    CHECK(*out.k0_width == best);
    CHECK(out.diagnostics.max_identity_error <= 1e-9);

    const std::string summary = FormatSummary(out);
    CHECK(summary.find("\"diagnostics\"") != std::string::npos);
    CHECK(summary.find("\"k0\": " + std::to_string(argmin)) != std::string::npos);
  }

  TEST_CASE("online runs without a known opponent policy report NA") {
    // Best-response opponents have a known policy; every regret is present.
    ExperimentConfig c = SmallConfig(Mode::kOnline, 10);
    c.opponent = OpponentKind::kBestResponse;
    const RunOutput out = Run(c);
    CHECK(out.TotalRegret().has_value());
    CHECK(out.diagnostics.Fraction(out.diagnostics.ucb_hits) == 1.0);
  }

  TEST_CASE("golden metrics file") {
    ExperimentConfig c = SmallConfig(Mode::kOffline, 8);
    c.c = 0.01;
    const RunOutput out = Run(c);
    CHECK(FormatCsv(out) == ReadTextFile(kData + "/golden_offline_k8_c001.csv"));
  }

  TEST_CASE("invalid games fail before any episode") {
    ExperimentConfig c = SmallConfig(Mode::kOffline, 5);
    c.game_path = kData + "/invalid_transition.json";
    try {
      Run(c);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kModelValidity);
    }
  }

  TEST_CASE("game files round trip") {
    Rng rng(3);
    const GameSpec g = RandomSimplexGame(5, 3, 2, 2, rng);
    const GameFile f = ParseGameFile(DumpGameSpec(g), "dump");
    REQUIRE(f.game.has_value());
    CHECK(DumpGameSpec(*f.game) == DumpGameSpec(g));
    for (int x = 0; x < 3; ++x)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          CHECK(f.game->Feature(x, a, b) == g.Feature(x, a, b));

    const GameFile t = LoadGameFile(kConfigs + "/games/turn_3state_h3.json");
    REQUIRE(t.is_turn());
    const GameFile t2 = ParseGameFile(DumpTurnSpec(*t.turn), "dump");
    CHECK(t2.turn->owner == t.turn->owner);
    CHECK(DumpTurnSpec(*t2.turn) == DumpTurnSpec(*t.turn));

    CHECK_THROWS_AS(ParseGameFile(R"({"format": 2})", "x"), Error);
    try {
      LoadGameFile(kData + "/does_not_exist.json");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kIo);
    }
  }

  TEST_CASE("number formatting") {
    CHECK(FormatDouble(0.1) == "0.10000000000000001");
    CHECK(FormatDouble(std::optional<double>()) == "NA");
    CHECK(CsvHeader(Mode::kOffline) == "k,ucb,lcb,gap,cum_gap,exploit1,exploit2");
    CHECK(CsvHeader(Mode::kOnline) == "k,value_ucb,nash_value,regret,cum_regret");
  }

  TEST_CASE("sweeps match individual runs") {
    ExperimentConfig c = SmallConfig(Mode::kOffline, 6);
    c.out = OMNIVI_BINARY_DIR "/sweep_test_out";
    const std::vector<RunOutput> cells = Sweep(c, {3, 4}, 2);
    REQUIRE(cells.size() == 2);
    c.seed = 4;
    CHECK(FormatCsv(cells[1]) == FormatCsv(Run(c)));
    CHECK(Lines(FormatSweepCsv(cells)).size() >= 3);
  }
}

}  // namespace
}  // namespace omnivi
