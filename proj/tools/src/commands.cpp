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

#include "coil/harness/commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "coil/gadgets.hpp"
#include "coil/harness/config.hpp"
#include "coil/harness/suites.hpp"
#include "coil/io.hpp"
#include "coil/logger.hpp"
#include "coil/olo.hpp"
#include "json.hpp"

namespace coil::harness {

using nlohmann::json;

namespace {

std::size_t expected_oracle_calls(const RegretLedger& ledger, std::size_t N) {
  switch (ledger.learner) {
    case LearnerKind::kMftpl: return N * ledger.params.T;
    case LearnerKind::kMftplEg: return 2 * N * ledger.params.T;
    default: return 0;
  }
}

std::size_t expected_annotations(const RegretLedger& ledger, std::size_t N) {
  const std::size_t K = ledger.params.K;
  return ledger.learner == LearnerKind::kMftplEg ? 2 * N * K : N * K;
}

}  // namespace

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  if (!args.seed) {
    err << "error: run requires --seed\n";
    return kExitConfig;
  }
  try {
    const RunConfig cfg = load_run_config(args.config, *args.seed);
    const auto csv_path = args.out ? args.out : cfg.out;
    if (!csv_path) throw ConfigError("no output path: pass --out or set \"out\" in the config");

    const auto start = std::chrono::steady_clock::now();
    const RegretLedger ledger = run_logger(cfg.instance, cfg.learner);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ostringstream csv;
    write_ledger_csv(csv, ledger);
    write_text_file(*csv_path, csv.str());

    const std::size_t N = cfg.learner.N;
    const auto& last = ledger.back();
    double sum_f = 0.0, sum_l = 0.0;
    for (const auto& r : ledger.rounds) {
      sum_f += r.F;
      sum_l += imitation_loss_exact(cfg.instance.mdp, cfg.instance.feedback,
                                    mixed_policy(cfg.instance.policies, r.u));
    }
    const bool counters_ok = last.annotations == expected_annotations(ledger, N) &&
                             last.oracle_calls == expected_oracle_calls(ledger, N);
    const bool identity_ok = std::abs(sum_f - sum_l) <= 1e-9 * std::max(1.0, std::abs(sum_l));
    const bool order_ok = last.dreg >= last.sreg - 1e-9;

    json summary;
    summary["config"] = json::parse(cfg.source_text);
    summary["seed"] = *args.seed;
    summary["learner"] = to_string(ledger.learner);
    summary["params"] = {{"eta", ledger.params.eta}, {"T", ledger.params.T}, {"K", ledger.params.K}};
    if (ledger.params.warning) summary["params"]["warning"] = *ledger.params.warning;
    summary["N"] = N;
    summary["SReg"] = last.sreg;
    summary["DReg"] = last.dreg;
    summary["LReg"] = last.lreg;
    summary["SReg_over_N"] = last.sreg / static_cast<double>(N);
    summary["annotations"] = last.annotations;
    summary["oracle_calls"] = last.oracle_calls;
    summary["csv"] = csv_path->string();
    summary["wall_clock_seconds"] = seconds;
    summary["invariants"] = {{"counters", counters_ok},
                             {"sum_F_equals_sum_L", identity_ok},
                             {"dreg_ge_sreg", order_ok}};
    out << summary.dump(2) << "\n";
    if (!(counters_ok && identity_ok && order_ok)) {
      err << "error: ledger invariant failed\n";
      return kExitRuntime;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_gadget(const GadgetArgs& args, std::ostream& out, std::ostream& err) {
  try {
    std::optional<LayeredMdp> mdp;
    std::optional<PolicyClass> policies;
    DeterministicPolicy expert;
    std::optional<std::string> note;
    std::optional<BimatrixGame> game;
    if (args.kind == "cover") {
      if (!args.H) throw ConfigError("gadget cover requires --H");
      CoverInstance cover = [&] {
        try {
          return make_cover_mdp(*args.H);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      }();
      mdp.emplace(cover.mdp);
      policies.emplace(cover.policies);
      expert = cover.expert;
      note = cover.note;
    } else if (args.kind == "reduce") {
      if (!args.game) throw ConfigError("gadget reduce requires --game");
      try {
        game = parse_game(read_text_file(*args.game));
        game->validate();
      } catch (const FormatError& e) {
        throw ConfigError(e.what());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      ReductionInstance red = map_f(*game);
      mdp.emplace(red.mdp);
      policies.emplace(red.policies);
      expert = red.expert;
    } else {
      throw ConfigError("unknown gadget \"" + args.kind + "\" (expected cover or reduce)");
    }

    // Round-trip through the loader so nothing invalid is written.
    const std::string mdp_text = mdp_to_json(*mdp);
    const LayeredMdp reloaded = parse_mdp(mdp_text);
    const SeparatorSet sep = greedy_separator(*policies);
    VerifiedSeparator::verify(*policies, sep);

    write_text_file(args.out / "mdp.json", mdp_text);
    write_text_file(args.out / "policies.json", policy_class_to_json(*policies));
    write_text_file(args.out / "expert.json", expert_to_json(expert));
    write_text_file(args.out / "separator.json", separator_to_json(sep));
    write_text_file(args.out / "feedback_advantage.json",
                    feedback_to_json(make_feedback(reloaded, expert, FeedbackKind::kAdvantage)));
    write_text_file(args.out / "feedback_zero_one.json",
                    feedback_to_json(make_feedback(reloaded, expert, FeedbackKind::kZeroOne)));
    if (game) write_text_file(args.out / "game.json", game_to_json(*game));

    const auto labels = aggregate_by_label(reloaded, std::vector<double>(reloaded.num_states(), 0.0));
    json summary{{"kind", args.kind},
                 {"H", reloaded.horizon()},
                 {"states", reloaded.num_states()},
                 {"logical_states", labels.labels},
                 {"actions", reloaded.num_actions()},
                 {"policies", policies->size()},
                 {"recoverability", recoverability(reloaded, expert)},
                 {"out", args.out.string()}};
    if (note) summary["note"] = *note;
    out << summary.dump(2) << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_check(const CheckArgs& args, std::ostream& out, std::ostream& err) {
  if (!suite_exists(args.suite)) {
    err << "config error: unknown suite \"" << args.suite << "\"; available: all";
    for (const auto& n : suite_names()) err << ", " << n;
    err << "\n";
    return kExitConfig;
  }
  if (!args.seed) {
    err << "error: check requires --seed\n";
    return kExitConfig;
  }
  try {
    std::vector<SuiteResult> results;
    const SuiteOptions opts{*args.seed, args.trials};
    if (args.suite == "all") {
      for (const auto& n : suite_names()) results.push_back(run_suite(n, opts));
    } else {
      results.push_back(run_suite(args.suite, opts));
    }
    const std::string report = suites_to_json(results);
    if (args.out) write_text_file(*args.out, report);
    out << report;
    for (const auto& r : results) {
      if (!r.passed) return kExitRuntime;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_params(const ParamsArgs& args, std::ostream& out, std::ostream& err) {
  try {
    MftplParams p;
    if (args.algorithm == "mftpl") {
      p = mftpl_default_params(args.N, args.S, args.A, args.B, args.X, args.mu, args.delta);
    } else if (args.algorithm == "mftpl_eg") {
      p = mftpl_eg_default_params(args.N, args.S, args.A, args.B, args.X, args.mu, args.H,
                                  args.delta);
    } else {
      err << "config error: unknown algorithm \"" << args.algorithm
          << "\" (expected mftpl or mftpl_eg)\n";
      return kExitConfig;
    }
    json doc{{"algorithm", args.algorithm}, {"eta", p.eta}, {"T", p.T}, {"K", p.K}};
    if (p.warning) {
      doc["warning"] = *p.warning;
      err << "warning: " << *p.warning << "\n";
    }
    out << doc.dump(2) << "\n";
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace coil::harness
