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

#ifndef COIL_IO_HPP_
#define COIL_IO_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>

#include "coil/gadgets.hpp"
#include "coil/imitation.hpp"
#include "coil/mdp.hpp"
#include "coil/policy_class.hpp"

namespace coil {

// Malformed or invalid input documents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// {"H", "layers", "A", "rho", "P": [t][s][a] -> dense row over all states, "cost"}.
// Parsing validates the MDP; a violation is reported as FormatError.
LayeredMdp parse_mdp(const std::string& text);
std::string mdp_to_json(const LayeredMdp& mdp);

// {"policies": [[action per state]]}
PolicyClass parse_policy_class(const std::string& text, std::size_t num_actions);
std::string policy_class_to_json(const PolicyClass& policies);

// {"expert": [action per state]}
DeterministicPolicy parse_expert(const std::string& text);
std::string expert_to_json(const DeterministicPolicy& expert);

// {"states": [indices]}
SeparatorSet parse_separator(const std::string& text);
std::string separator_to_json(const SeparatorSet& separator);

// {"m", "V": [[...]], "W": [[...]]}; normalization is checked by the caller.
BimatrixGame parse_game(const std::string& text);
std::string game_to_json(const BimatrixGame& game);

// {"kind": "zero_one" | "advantage", "mu", "expert", "zeta": [[...]]}
std::string feedback_to_json(const ExpertFeedback& feedback);

// One {"s": index, "c": [...]} object per line.
std::string dataset_to_jsonl(const Dataset& dataset);
Dataset parse_dataset_jsonl(const std::string& text);

}  // namespace coil

#endif  // COIL_IO_HPP_
