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

#include "coil/harness/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "coil/gadgets.hpp"
#include "coil/io.hpp"
#include "json.hpp"

namespace coil::harness {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <typename T>
T get(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ConfigError(std::string("config is missing \"") + key + "\"");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field \"") + key + "\": " + e.what());
  }
}

template <typename T>
std::optional<T> get_optional(const json& doc, const char* key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return get<T>(doc, key);
}

struct LoadedInstance {
  std::optional<LayeredMdp> mdp;
  std::optional<DeterministicPolicy> expert;
  std::optional<PolicyClass> policies;
  std::optional<SeparatorSet> separator;
};

LoadedInstance load_instance(const json& desc, const std::filesystem::path& base) {
  const auto type = get<std::string>(desc, "type");
  LoadedInstance out;
  if (type == "cover") {
    auto cover = make_cover_mdp(get<std::size_t>(desc, "H"));
    out.mdp.emplace(cover.mdp);
    out.expert = cover.expert;
    out.policies.emplace(cover.policies);
  } else if (type == "reduce") {
    const auto game = parse_game(read_text_file(resolve(base, get<std::string>(desc, "game"))));
    auto red = map_f(game);
    out.mdp.emplace(red.mdp);
    out.expert = red.expert;
    out.policies.emplace(red.policies);
  } else if (type == "files") {
    out.mdp.emplace(parse_mdp(read_text_file(resolve(base, get<std::string>(desc, "mdp")))));
    out.expert = parse_expert(read_text_file(resolve(base, get<std::string>(desc, "expert"))));
    out.policies.emplace(parse_policy_class(
        read_text_file(resolve(base, get<std::string>(desc, "policies"))),
        out.mdp->num_actions()));
    if (auto sep = get_optional<std::string>(desc, "separator")) {
      out.separator = parse_separator(read_text_file(resolve(base, *sep)));
    }
  } else {
    throw ConfigError("unknown instance type \"" + type + "\"");
  }
  if (out.expert->size() != out.mdp->num_states()) {
    throw ConfigError("expert does not cover the MDP states");
  }
  for (ActionIndex a : out.expert->actions) {
    if (a >= out.mdp->num_actions()) throw ConfigError("expert action out of range");
  }
  out.policies->check_compatible(*out.mdp);
  if (!out.separator && out.policies->all_distinct()) out.separator = greedy_separator(*out.policies);
  return out;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path, std::uint64_t seed) {
  std::string text;
  json doc;
  try {
    text = read_text_file(path);
    doc = json::parse(text);
  } catch (const FormatError& e) {
    throw ConfigError(e.what());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");

  try {
    LoadedInstance loaded = load_instance(get<json>(doc, "instance"), base);

    const json fb = doc.contains("feedback") ? doc.at("feedback") : json::object();
    const auto kind_name = fb.contains("kind") ? get<std::string>(fb, "kind") : "zero_one";
    FeedbackKind kind;
    if (kind_name == "zero_one") {
      kind = FeedbackKind::kZeroOne;
    } else if (kind_name == "advantage") {
      kind = FeedbackKind::kAdvantage;
    } else {
      throw ConfigError("unknown feedback kind \"" + kind_name + "\"");
    }
    ExpertFeedback feedback =
        make_feedback(*loaded.mdp, *loaded.expert, kind, get_optional<double>(fb, "mu"));

    LearnerConfig learner;
    const auto learner_name = get<std::string>(doc, "learner");
    const auto parsed = parse_learner(learner_name);
    if (!parsed || *parsed == LearnerKind::kCustom) {
      throw ConfigError("unknown learner \"" + learner_name + "\"");
    }
    learner.kind = *parsed;
    learner.N = get<std::size_t>(doc, "N");
    learner.K = get_optional<std::size_t>(doc, "K").value_or(1);
    learner.delta = get_optional<double>(doc, "delta").value_or(0.1);
    learner.eta = get_optional<double>(doc, "eta");
    learner.T = get_optional<std::size_t>(doc, "T");
    learner.seed = seed;
    learner.threads = thread_budget();
    learner.validate();
    if ((learner.kind == LearnerKind::kMftpl || learner.kind == LearnerKind::kMftplEg)) {
      if (!loaded.separator) throw ConfigError("MFTPL learners need a separator set");
      VerifiedSeparator::verify(*loaded.policies, *loaded.separator);
    }

    std::optional<std::filesystem::path> out;
    if (auto o = get_optional<std::string>(doc, "out")) out = resolve(base, *o);

    return RunConfig{std::move(text),
                     ImitationInstance{std::move(*loaded.mdp), std::move(*loaded.expert),
                                       std::move(*loaded.policies), std::move(feedback),
                                       std::move(loaded.separator)},
                     std::move(learner), std::move(out)};
  } catch (const ConfigError&) {
    throw;
  } catch (const FormatError& e) {
    throw ConfigError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::size_t thread_budget() {
  const char* env = std::getenv("COIL_LAB_THREADS");
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (env == nullptr) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return 1;
  return std::min<std::size_t>(static_cast<std::size_t>(v), hw);
}

}  // namespace coil::harness
