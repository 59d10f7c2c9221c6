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

#ifndef COIL_IMITATION_HPP_
#define COIL_IMITATION_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coil/mdp.hpp"
#include "coil/policy_class.hpp"

namespace coil {

enum class FeedbackKind { kZeroOne, kAdvantage };

// The expert's per-state cost vectors zeta_E(s, .), stored as a full S x A
// table. Construction verifies A^E <= zeta_E <= mu * 1{a != expert(s)}.
class ExpertFeedback {
 public:
  ExpertFeedback(FeedbackKind kind, double mu, DeterministicPolicy expert,
                 std::vector<double> table, std::size_t num_actions);

  FeedbackKind kind() const { return kind_; }
  double mu() const { return mu_; }
  const DeterministicPolicy& expert() const { return expert_; }
  std::size_t num_states() const { return expert_.size(); }
  std::size_t num_actions() const { return num_actions_; }
  double operator()(StateIndex s, ActionIndex a) const { return table_[s * num_actions_ + a]; }
  std::span<const double> row(StateIndex s) const {
    return {table_.data() + s * num_actions_, num_actions_};
  }
  std::span<const double> table() const { return table_; }

 private:
  FeedbackKind kind_;
  double mu_;
  DeterministicPolicy expert_;
  std::vector<double> table_;
  std::size_t num_actions_;
};

// mu defaults to recoverability(mdp, expert). A ZeroOne mu below that value
// breaks the sandwich and is rejected with std::invalid_argument.
ExpertFeedback make_feedback(const LayeredMdp& mdp, const DeterministicPolicy& expert,
                             FeedbackKind kind, std::optional<double> mu = std::nullopt);

// First (s, a) where A^E(s,a) <= zeta(s,a) <= mu * 1{a != expert(s)} fails by
// more than kProbTolerance.
std::optional<std::pair<StateIndex, ActionIndex>> find_sandwich_violation(
    std::span<const double> advantage, std::span<const double> zeta,
    const DeterministicPolicy& expert, double mu, std::size_t num_actions);

// F(eval) under the occupancy of `roll`: E_{s~d_roll} E_{a~eval(.|s)}[zeta(s,a)].
double round_loss_exact(const LayeredMdp& mdp, const ExpertFeedback& feedback,
                        const StochasticPolicy& roll, const StochasticPolicy& eval);

// L(pi) = F with roll = eval = pi.
double imitation_loss_exact(const LayeredMdp& mdp, const ExpertFeedback& feedback,
                            const StochasticPolicy& pi);

// The linear loss vector over the class: one entry per policy.
struct LinearLoss {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t h) const { return values[h]; }
  double dot(const MixedWeight& u) const;
};

// theta(u)[h] = E_{s~d_{pi_u}}[zeta(s, h(s))], from the exact occupancy of pi_u.
LinearLoss theta_exact(const LayeredMdp& mdp, const ExpertFeedback& feedback,
                       const PolicyClass& policies, const MixedWeight& u);
// Same, for an occupancy that has already been computed.
LinearLoss theta_from_occupancy(const ExpertFeedback& feedback, const PolicyClass& policies,
                                const OccupancyProfile& occ);

// K iid examples: each rolls one fresh trajectory of `roll`, picks a uniform
// step, and records (s_t, zeta(s_t, .)). Throws on K = 0.
Dataset sample_dataset(const LayeredMdp& mdp, const ExpertFeedback& feedback,
                       const StochasticPolicy& roll, std::size_t num_examples, Rng& rng);
Dataset sample_dataset(const LayeredMdp& mdp, const ExpertFeedback& feedback,
                       const StochasticPolicy& roll, std::size_t num_examples,
                       std::uint64_t seed);

// g[h] = (1/K) sum over examples of c(h(s)). Throws on an empty dataset.
LinearLoss linear_loss_of(const Dataset& dataset, const PolicyClass& policies);

}  // namespace coil

#endif  // COIL_IMITATION_HPP_
