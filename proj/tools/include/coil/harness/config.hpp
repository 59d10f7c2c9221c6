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

#ifndef COIL_HARNESS_CONFIG_HPP_
#define COIL_HARNESS_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "coil/logger.hpp"

namespace coil::harness {

// Anything wrong with the user's input; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parsed experiment configuration.
//
//   {
//     "instance": {"type": "cover", "H": 3}
//               | {"type": "reduce", "game": "game.json"}
//               | {"type": "files", "mdp": ..., "policies": ..., "expert": ...,
//                  "separator": ...},
//     "feedback": {"kind": "zero_one" | "advantage", "mu": 1.0},
//     "learner": "hedge" | "mftpl" | "mftpl_eg" | "ftl_proper",
//     "N": 100, "K": 1, "delta": 0.1, "eta": 0.05, "T": 200,
//     "out": "ledger.csv"
//   }
//
// Relative paths resolve against the config file's directory.
struct RunConfig {
  std::string source_text;
  ImitationInstance instance;
  LearnerConfig learner;
  std::optional<std::filesystem::path> out;
};

RunConfig load_run_config(const std::filesystem::path& path, std::uint64_t seed);

// COIL_LAB_THREADS, clamped to [1, hardware threads]; 1 when unset or invalid.
std::size_t thread_budget();

}  // namespace coil::harness

#endif  // COIL_HARNESS_CONFIG_HPP_
