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

#ifndef OMNIVI_SPEC_IO_H_
#define OMNIVI_SPEC_IO_H_

// JSON game files.
//
// {
//   "format": 1,
//   "kind": "simultaneous" | "turn",
//   "horizon": H, "num_states": S, "num_actions": A,
//   "initial_state": x | {"distribution": [p_0, ...]},
//   "owner": [1, 2, ...],                      (turn only)
//
//   "representation": "tabular",
//   "reward":     [h][x][a][b]        ([h][x][a] for turn games),
//   "transition": [h][x][a][b][x']    ([h][x][a][x'] for turn games)
//
//   or
//
//   "representation": "linear",
//   "dim": d,
//   "features": [[phi_1..phi_d], ...]   one row per (x, a, b), or per (x, a)
//   "theta": [h][d],
//   "mu":    [h][d][S]
// }

#include <optional>
#include <string>

#include "omnivi/game_model.h"

namespace omnivi {

struct GameFile {
  std::optional<GameSpec> game;  // simultaneous-move file
  std::optional<TurnSpec> turn;  // turn-based file

  bool is_turn() const { return turn.has_value(); }
  // The simultaneous game, embedding turn-based files.
  GameSpec Simultaneous() const;
};

// Malformed documents throw kInput; `origin` prefixes the messages.
GameFile ParseGameFile(const std::string& text, const std::string& origin);
// Adds kIo for unreadable files.
GameFile LoadGameFile(const std::string& path);

// Linear representation; numbers round-trip exactly.
std::string DumpGameSpec(const GameSpec& spec);
std::string DumpTurnSpec(const TurnSpec& spec);

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

}  // namespace omnivi

#endif  // OMNIVI_SPEC_IO_H_
