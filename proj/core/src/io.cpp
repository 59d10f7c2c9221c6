// Copyright 2026 The COIL Lab Authors
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

#include "coil/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace coil {

using nlohmann::json;

namespace {

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw FormatError(std::string("missing field \"") + key + "\"");
  }
  return doc.at(key);
}

template <typename T>
T as(const json& value, const char* what) {
  try {
    return value.get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad ") + what + ": " + e.what());
  }
}

std::vector<std::vector<double>> square_matrix(const json& value, std::size_t m, const char* what) {
  auto rows = as<std::vector<std::vector<double>>>(value, what);
  if (rows.size() != m) throw FormatError(std::string(what) + " must have m rows");
  for (const auto& r : rows) {
    if (r.size() != m) throw FormatError(std::string(what) + " must have m columns");
  }
  return rows;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

LayeredMdp parse_mdp(const std::string& text) {
  const json doc = parse_document(text);
  MdpData data;
  const auto H = as<std::size_t>(field(doc, "H"), "H");
  data.num_actions = as<std::size_t>(field(doc, "A"), "A");
  data.layers = as<std::vector<std::vector<std::string>>>(field(doc, "layers"), "layers");
  if (data.layers.size() != H) throw FormatError("H does not match the number of layers");
  data.rho = as<std::vector<double>>(field(doc, "rho"), "rho");
  data.transitions =
      as<std::vector<std::vector<std::vector<std::vector<double>>>>>(field(doc, "P"), "P");
  data.cost = as<std::vector<std::vector<double>>>(field(doc, "cost"), "cost");
  if (auto bad = validate_mdp(data)) {
    std::string where;
    if (bad->step) where += " step " + std::to_string(*bad->step);
    if (bad->state) where += " state " + std::to_string(*bad->state);
    if (bad->action) where += " action " + std::to_string(*bad->action);
    throw FormatError("invalid MDP: " + bad->message + (where.empty() ? "" : " at" + where));
  }
  return LayeredMdp(std::move(data));
}

std::string mdp_to_json(const LayeredMdp& mdp) {
  const MdpData data = mdp.to_data();
  json doc;
  doc["H"] = data.layers.size();
  doc["A"] = data.num_actions;
  doc["layers"] = data.layers;
  doc["rho"] = data.rho;
  doc["P"] = data.transitions;
  doc["cost"] = data.cost;
  return doc.dump() + "\n";
}

PolicyClass parse_policy_class(const std::string& text, std::size_t num_actions) {
  const json doc = parse_document(text);
  const auto rows = as<std::vector<std::vector<std::size_t>>>(field(doc, "policies"), "policies");
  std::vector<DeterministicPolicy> policies;
  for (const auto& r : rows) policies.push_back(DeterministicPolicy{r});
  try {
    return PolicyClass(std::move(policies), num_actions);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid policy class: ") + e.what());
  }
}

std::string policy_class_to_json(const PolicyClass& policies) {
  json rows = json::array();
  for (const auto& h : policies.policies()) rows.push_back(h.actions);
  return json{{"policies", rows}}.dump() + "\n";
}

DeterministicPolicy parse_expert(const std::string& text) {
  const json doc = parse_document(text);
  return DeterministicPolicy{as<std::vector<std::size_t>>(field(doc, "expert"), "expert")};
}

std::string expert_to_json(const DeterministicPolicy& expert) {
  return json{{"expert", expert.actions}}.dump() + "\n";
}

SeparatorSet parse_separator(const std::string& text) {
  const json doc = parse_document(text);
  return SeparatorSet{as<std::vector<std::size_t>>(field(doc, "states"), "states")};
}

std::string separator_to_json(const SeparatorSet& separator) {
  return json{{"states", separator.states}}.dump() + "\n";
}

BimatrixGame parse_game(const std::string& text) {
  const json doc = parse_document(text);
  BimatrixGame game;
  game.m = as<std::size_t>(field(doc, "m"), "m");
  for (const auto& r : square_matrix(field(doc, "V"), game.m, "V")) {
    game.V.insert(game.V.end(), r.begin(), r.end());
  }
  for (const auto& r : square_matrix(field(doc, "W"), game.m, "W")) {
    game.W.insert(game.W.end(), r.begin(), r.end());
  }
  return game;
}

std::string game_to_json(const BimatrixGame& game) {
  json V = json::array(), W = json::array();
  for (std::size_t i = 0; i < game.m; ++i) {
    V.push_back(std::vector<double>(game.V.begin() + i * game.m, game.V.begin() + (i + 1) * game.m));
    W.push_back(std::vector<double>(game.W.begin() + i * game.m, game.W.begin() + (i + 1) * game.m));
  }
  return json{{"m", game.m}, {"V", V}, {"W", W}}.dump() + "\n";
}

std::string feedback_to_json(const ExpertFeedback& feedback) {
  json zeta = json::array();
  for (StateIndex s = 0; s < feedback.num_states(); ++s) {
    const auto row = feedback.row(s);
    zeta.push_back(std::vector<double>(row.begin(), row.end()));
  }
  json doc;
  doc["kind"] = feedback.kind() == FeedbackKind::kZeroOne ? "zero_one" : "advantage";
  doc["mu"] = feedback.mu();
  doc["expert"] = feedback.expert().actions;
  doc["zeta"] = zeta;
  return doc.dump() + "\n";
}

std::string dataset_to_jsonl(const Dataset& dataset) {
  std::string out;
  for (const auto& ex : dataset.examples) {
    out += json{{"s", ex.state}, {"c", ex.cost}}.dump();
    out += '\n';
  }
  return out;
}

Dataset parse_dataset_jsonl(const std::string& text) {
  Dataset out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json doc = parse_document(line);
    out.examples.push_back(CscExample{as<std::size_t>(field(doc, "s"), "s"),
                                      as<std::vector<double>>(field(doc, "c"), "c")});
  }
  return out;
}

}  // namespace coil
