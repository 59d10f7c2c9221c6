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

#ifndef COIL_LOGGER_HPP_
#define COIL_LOGGER_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coil/imitation.hpp"
#include "coil/mdp.hpp"
#include "coil/olo.hpp"
#include "coil/policy_class.hpp"

namespace coil {

enum class LearnerKind { kHedge, kMftpl, kMftplEg, kFtlProper, kCustom };

std::string to_string(LearnerKind kind);
// Accepts "hedge", "mftpl", "mftpl_eg", "ftl_proper", "custom".
std::optional<LearnerKind> parse_learner(const std::string& name);

// Everything the Logger needs to know about the imitation problem.
struct ImitationInstance {
  LayeredMdp mdp;
  DeterministicPolicy expert;
  PolicyClass policies;
  ExpertFeedback feedback;
  std::optional<SeparatorSet> separator;
};

// A custom learner maps the observed loss vectors g_1..g_{n-1} to u_n.
using CustomLearner = std::function<MixedWeight(std::span<const LinearLoss>)>;

struct LearnerConfig {
  LearnerKind kind = LearnerKind::kHedge;
  std::size_t N = 1;
  std::size_t K = 1;
  double delta = 0.1;
  std::uint64_t seed = 0;
  // Hedge defaults to sqrt(ln B / (2N)); the MFTPL variants default to their
  // schedules.
  std::optional<double> eta;
  std::optional<std::size_t> T;
  std::size_t threads = 1;
  CustomLearner custom;

  // Throws std::invalid_argument on an incomplete configuration.
  void validate() const;
};

struct RoundRecord {
  std::size_t n = 0;
  MixedWeight u = MixedWeight::uniform(1);
  LinearLoss g;
  LinearLoss theta;
  double F = 0.0;         // exact F_n(pi_n) = L(pi_{u_n})
  double lin_loss = 0.0;  // <g_n, u_n>
  std::optional<MixedWeight> u_hat;
  std::optional<LinearLoss> g_hat;
  double sreg = 0.0;
  double dreg = 0.0;
  double lreg = 0.0;
  std::size_t annotations = 0;   // cumulative
  std::size_t oracle_calls = 0;  // cumulative
};

struct RegretLedger {
  LearnerKind learner = LearnerKind::kHedge;
  MftplParams params;  // the eta/T/K actually used
  std::vector<RoundRecord> rounds;

  std::size_t size() const { return rounds.size(); }
  const RoundRecord& back() const { return rounds.back(); }
};

// The Logger loop: u_n from the learner, exact F_n and theta_n, D_n of K
// examples under pi_{u_n}, g_n from D_n, cumulative regrets. Throws on a
// missing or unverifiable separator for the MFTPL learners.
RegretLedger run_logger(const ImitationInstance& instance, const LearnerConfig& config);

// Recomputed from the per-round records.
double static_regret(const RegretLedger& ledger);
double dynamic_regret(const RegretLedger& ledger);
double linear_regret(const RegretLedger& ledger);

// argmin_h sum_i g_i[h], lowest index on ties; 0 on an empty history.
std::size_t ftl_proper_baseline(std::span<const LinearLoss> history);

// ERM on 0-1 disagreement with the expert over K states drawn from d_{pi^E}.
// One oracle call.
std::size_t behavior_cloning(const LayeredMdp& mdp, const DeterministicPolicy& expert,
                             const PolicyClass& policies, std::size_t K, std::uint64_t seed);

// E_{s~d_{pi^E}}[1{h(s) != pi^E(s)}] for each h.
std::vector<double> expert_disagreement(const LayeredMdp& mdp, const DeterministicPolicy& expert,
                                        const PolicyClass& policies);
// min over h of expert_disagreement.
double bias_expert(const LayeredMdp& mdp, const DeterministicPolicy& expert,
                   const PolicyClass& policies);
// Grid estimate of max over u in the simplex of
// min_h E_{s~d_{pi_u}}[1{h(s) != pi^E(s)}], at u = (k/r, 1 - k/r) for k = 0..r.
// Only two-policy classes are supported.
double bias_mixed_grid(const LayeredMdp& mdp, const DeterministicPolicy& expert,
                       const PolicyClass& policies, std::size_t resolution = 200);

inline constexpr const char* kLedgerCsvHeader =
    "n,F_n,lin_loss,SReg,DReg,LReg,annotations,oracle_calls";

// Shortest round-trip decimal form.
std::string format_double(double value);
void write_ledger_csv(std::ostream& out, const RegretLedger& ledger);

}  // namespace coil

#endif  // COIL_LOGGER_HPP_
