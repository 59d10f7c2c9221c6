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

#include <iostream>

#include "CLI11.hpp"
#include "coil/harness/commands.hpp"

int main(int argc, char** argv) {
  using namespace coil::harness;
  CLI::App app{"coil_lab: tabular classification-based online imitation learning laboratory"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run the Logger loop from a JSON config");
  run_cmd->add_option("--config", run.config, "Experiment config (JSON)")->required();
  run_cmd->add_option("--seed", run.seed, "Random seed (required)");
  run_cmd->add_option("--out", run.out, "Per-round CSV path");

  GadgetArgs gadget;
  auto* gadget_cmd = app.add_subcommand("gadget", "Emit a constructed instance as JSON files");
  gadget_cmd->add_option("kind", gadget.kind, "cover | reduce")->required();
  gadget_cmd->add_option("--H", gadget.H, "Horizon for the cover MDP");
  gadget_cmd->add_option("--game", gadget.game, "Bimatrix game JSON for the reduction");
  gadget_cmd->add_option("--out", gadget.out, "Output directory")->required();

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Run an invariant suite");
  check_cmd->add_option("--suite", check.suite, "Suite name or \"all\"")->required();
  check_cmd->add_option("--seed", check.seed, "Random seed (required)");
  check_cmd->add_option("--trials", check.trials, "Override the trial count");
  check_cmd->add_option("--out", check.out, "Also write the report here");

  ParamsArgs params;
  auto* params_cmd = app.add_subcommand("params", "Print an MFTPL or MFTPL-EG schedule");
  params_cmd->add_option("--algorithm", params.algorithm, "mftpl | mftpl_eg")->required();
  params_cmd->add_option("--N", params.N, "Rounds")->required();
  params_cmd->add_option("--S", params.S, "States")->required();
  params_cmd->add_option("--A", params.A, "Actions")->required();
  params_cmd->add_option("--B", params.B, "Policy class size")->required();
  params_cmd->add_option("--X", params.X, "Separator size")->required();
  params_cmd->add_option("--mu", params.mu, "Recoverability constant")->required();
  params_cmd->add_option("--H", params.H, "Horizon (mftpl_eg)")->default_val(1);
  params_cmd->add_option("--delta", params.delta, "Failure probability")->default_val(0.1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (run_cmd->parsed()) return cmd_run(run, std::cout, std::cerr);
  if (gadget_cmd->parsed()) return cmd_gadget(gadget, std::cout, std::cerr);
  if (check_cmd->parsed()) return cmd_check(check, std::cout, std::cerr);
  return cmd_params(params, std::cout, std::cerr);
}
