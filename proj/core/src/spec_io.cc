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

#include "omnivi/spec_io.h"

#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "omnivi/errors.h"

namespace omnivi {
namespace {

using nlohmann::json;

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void Bad(const std::string& what) const {
    Fail(ErrorKind::kInput, origin_ + ": " + what);
  }

  const json& Field(const json& obj, const char* key) const {
    if (!obj.is_object() || !obj.contains(key))
      Bad(std::string("missing field '") + key + "'");
    return obj.at(key);
  }

  int Int(const json& obj, const char* key) const {
    const json& v = Field(obj, key);
    if (!v.is_number_integer()) Bad(std::string("'") + key + "' must be an integer");
    return v.get<int>();
  }

  double Number(const json& v, const std::string& where) const {
    if (!v.is_number()) Bad(where + " must be a number");
    return v.get<double>();
  }

  // Flattens a nested array of the given shape in row-major order.
  std::vector<double> Tensor(const json& v, const std::vector<int>& shape,
                             const std::string& name) const {
    std::vector<double> out;
    Collect(v, shape, 0, name, out);
    return out;
  }

 private:
  void Collect(const json& v, const std::vector<int>& shape, std::size_t depth,
               const std::string& name, std::vector<double>& out) const {
    if (depth == shape.size()) {
      out.push_back(Number(v, name));
      return;
    }
    if (!v.is_array() || static_cast<int>(v.size()) != shape[depth]) {
      Bad("'" + name + "' must have length " + std::to_string(shape[depth]) +
          " at depth " + std::to_string(depth));
    }
    for (const json& child : v) Collect(child, shape, depth + 1, name, out);
  }

  std::string origin_;
};

InitialState ParseInitial(const Reader& r, const json& doc, int num_states) {
  if (!doc.contains("initial_state")) return InitialState::Fixed(0);
  const json& v = doc.at("initial_state");
  if (v.is_number_integer()) {
    const int x = v.get<int>();
    if (x < 0 || x >= num_states) r.Bad("initial_state out of range");
    return InitialState::Fixed(x);
  }
  const std::vector<double> probs =
      r.Tensor(r.Field(v, "distribution"), {num_states}, "distribution");
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) r.Bad("initial distribution has a negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    r.Bad("initial distribution does not sum to 1");
  return InitialState::Distribution(probs);
}

json InitialToJson(const InitialState& initial) {
  if (initial.state) return *initial.state;
  return json{{"distribution", initial.distribution}};
}

struct LinearParts {
  int dim = 0;
  std::vector<Vector> features;
  std::vector<Vector> theta;
  std::vector<Matrix> mu;
};

LinearParts ParseLinear(const Reader& r, const json& doc, int rows, int horizon,
                        int num_states) {
  LinearParts parts;
  parts.dim = r.Int(doc, "dim");
  if (parts.dim <= 0) r.Bad("dim must be positive");
  const int d = parts.dim;
  const std::vector<double> phi =
      r.Tensor(r.Field(doc, "features"), {rows, d}, "features");
  for (int i = 0; i < rows; ++i)
    parts.features.push_back(Eigen::Map<const Vector>(&phi[i * d], d));
  const std::vector<double> theta =
      r.Tensor(r.Field(doc, "theta"), {horizon, d}, "theta");
  const std::vector<double> mu =
      r.Tensor(r.Field(doc, "mu"), {horizon, d, num_states}, "mu");
  for (int h = 0; h < horizon; ++h) {
    parts.theta.push_back(Eigen::Map<const Vector>(&theta[h * d], d));
    Matrix m(d, num_states);
    for (int i = 0; i < d; ++i)
      for (int y = 0; y < num_states; ++y)
        m(i, y) = mu[(static_cast<std::size_t>(h) * d + i) * num_states + y];
    parts.mu.push_back(std::move(m));
  }
  return parts;
}

json LinearToJson(int dim, const std::vector<Vector>& features,
                  const std::vector<Vector>& theta,
                  const std::vector<Matrix>& mu) {
  json doc;
  doc["representation"] = "linear";
  doc["dim"] = dim;
  json rows = json::array();
  for (const Vector& f : features)
    rows.push_back(std::vector<double>(f.data(), f.data() + f.size()));
  doc["features"] = rows;
  json th = json::array();
  for (const Vector& t : theta)
    th.push_back(std::vector<double>(t.data(), t.data() + t.size()));
  doc["theta"] = th;
  json mus = json::array();
  for (const Matrix& m : mu) {
    json rows_mu = json::array();
    for (int i = 0; i < m.rows(); ++i) {
      std::vector<double> row(m.cols());
      for (int y = 0; y < m.cols(); ++y) row[y] = m(i, y);
      rows_mu.push_back(row);
    }
    mus.push_back(rows_mu);
  }
  doc["mu"] = mus;
  return doc;
}

}  // namespace

GameSpec GameFile::Simultaneous() const {
  if (turn) return EmbedTurnBased(*turn);
  Require(game.has_value(), ErrorKind::kInternalState, "empty game file");
  return *game;
}

GameFile ParseGameFile(const std::string& text, const std::string& origin) {
  Reader r(origin);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    r.Bad(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) r.Bad("top level must be an object");
  if (r.Int(doc, "format") != 1) r.Bad("unsupported format version");
  const std::string kind = doc.value("kind", std::string("simultaneous"));
  if (kind != "simultaneous" && kind != "turn") r.Bad("unknown kind '" + kind + "'");
  const int horizon = r.Int(doc, "horizon");
  const int states = r.Int(doc, "num_states");
  const int actions = r.Int(doc, "num_actions");
  if (horizon <= 0 || states <= 0 || actions <= 0)
    r.Bad("horizon, num_states and num_actions must be positive");
  const json& rep_field = r.Field(doc, "representation");
  if (!rep_field.is_string()) r.Bad("'representation' must be a string");
  const std::string rep = rep_field.get<std::string>();
  if (rep != "tabular" && rep != "linear")
    r.Bad("unknown representation '" + rep + "'");
  const InitialState initial = ParseInitial(r, doc, states);

  GameFile file;
  if (kind == "simultaneous") {
    if (rep == "tabular") {
      TabularTables tables(horizon, states, actions);
      tables.reward = r.Tensor(r.Field(doc, "reward"),
                               {horizon, states, actions, actions}, "reward");
      tables.transition =
          r.Tensor(r.Field(doc, "transition"),
                   {horizon, states, actions, actions, states}, "transition");
      file.game.emplace(TabularGame(tables));
    } else {
      LinearParts parts =
          ParseLinear(r, doc, states * actions * actions, horizon, states);
      file.game.emplace(parts.dim, horizon, states, actions,
                        std::move(parts.features), std::move(parts.theta),
                        std::move(parts.mu));
    }
    file.game->set_initial_state(initial);
    return file;
  }

  std::vector<int> owner;
  const json& owner_field = r.Field(doc, "owner");
  if (!owner_field.is_array() || static_cast<int>(owner_field.size()) != states)
    r.Bad("'owner' must list one owner per state");
  for (const json& o : owner_field) {
    if (!o.is_number_integer()) r.Bad("owners must be integers");
    owner.push_back(o.get<int>());
  }
  if (rep == "tabular") {
    TabularTurnTables tables(horizon, states, actions);
    tables.reward =
        r.Tensor(r.Field(doc, "reward"), {horizon, states, actions}, "reward");
    tables.transition = r.Tensor(r.Field(doc, "transition"),
                                 {horizon, states, actions, states},
                                 "transition");
    tables.owner = owner;
    file.turn.emplace(TabularTurnGame(tables));
  } else {
    LinearParts parts = ParseLinear(r, doc, states * actions, horizon, states);
    TurnSpec turn;
    turn.dim = parts.dim;
    turn.horizon = horizon;
    turn.num_states = states;
    turn.num_actions = actions;
    turn.features = std::move(parts.features);
    turn.theta = std::move(parts.theta);
    turn.mu = std::move(parts.mu);
    turn.owner = owner;
    file.turn.emplace(std::move(turn));
  }
  file.turn->initial = initial;
  return file;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) Fail(ErrorKind::kIo, "cannot read '" + path + "'");
  return buf.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) Fail(ErrorKind::kIo, "cannot write '" + path + "'");
}

GameFile LoadGameFile(const std::string& path) {
  return ParseGameFile(ReadTextFile(path), path);
}

std::string DumpGameSpec(const GameSpec& spec) {
  std::vector<Vector> theta, features;
  std::vector<Matrix> mu;
  for (int h = 0; h < spec.horizon(); ++h) {
    theta.push_back(spec.theta(h));
    mu.push_back(spec.mu(h));
  }
  json doc = LinearToJson(spec.dim(), spec.features(), theta, mu);
  doc["format"] = 1;
  doc["kind"] = "simultaneous";
  doc["horizon"] = spec.horizon();
  doc["num_states"] = spec.num_states();
  doc["num_actions"] = spec.num_actions();
  doc["initial_state"] = InitialToJson(spec.initial_state());
  return doc.dump(2) + "\n";
}

std::string DumpTurnSpec(const TurnSpec& spec) {
  json doc = LinearToJson(spec.dim, spec.features, spec.theta, spec.mu);
  doc["format"] = 1;
  doc["kind"] = "turn";
  doc["horizon"] = spec.horizon;
  doc["num_states"] = spec.num_states;
  doc["num_actions"] = spec.num_actions;
  doc["owner"] = spec.owner;
  doc["initial_state"] = InitialToJson(spec.initial);
  return doc.dump(2) + "\n";
}

}  // namespace omnivi
