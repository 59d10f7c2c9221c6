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

#ifndef COIL_HARNESS_COMMANDS_HPP_
#define COIL_HARNESS_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace coil::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

struct RunArgs {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
};

// Runs the Logger loop, writes the per-round CSV and prints a JSON summary.
int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);

struct GadgetArgs {
  std::string kind;  // "cover" or "reduce"
  std::optional<std::size_t> H;
  std::optional<std::filesystem::path> game;
  std::filesystem::path out;
};

// Writes mdp.json, policies.json, expert.json, separator.json and the
// feedback tables into `out`.
int cmd_gadget(const GadgetArgs& args, std::ostream& out, std::ostream& err);

struct CheckArgs {
  std::string suite;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::filesystem::path> out;
};

int cmd_check(const CheckArgs& args, std::ostream& out, std::ostream& err);

struct ParamsArgs {
  std::string algorithm;  // "mftpl" or "mftpl_eg"
  std::size_t N = 0, S = 0, A = 0, B = 0, X = 0, H = 0;
  double mu = 0.0;
  double delta = 0.0;
};

int cmd_params(const ParamsArgs& args, std::ostream& out, std::ostream& err);

}  // namespace coil::harness

#endif  // COIL_HARNESS_COMMANDS_HPP_
