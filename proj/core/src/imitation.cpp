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

#include "coil/imitation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace coil {

std::optional<std::pair<StateIndex, ActionIndex>> find_sandwich_violation(
    std::span<const double> advantage, std::span<const double> zeta,
    const DeterministicPolicy& expert, double mu, std::size_t num_actions) {
  for (StateIndex s = 0; s < expert.size(); ++s) {
    for (ActionIndex a = 0; a < num_actions; ++a) {
      const double lower = advantage[s * num_actions + a];
      const double upper = a == expert(s) ? 0.0 : mu;
      const double z = zeta[s * num_actions + a];
      if (z < lower - kProbTolerance || z > upper + kProbTolerance) return std::make_pair(s, a);
    }
  }
  return std::nullopt;
}

ExpertFeedback::ExpertFeedback(FeedbackKind kind, double mu, DeterministicPolicy expert,
                               std::vector<double> table, std::size_t num_actions)
    : kind_(kind),
      mu_(mu),
      expert_(std::move(expert)),
      table_(std::move(table)),
      num_actions_(num_actions) {
  if (!(mu_ >= 0.0) || !std::isfinite(mu_)) throw std::invalid_argument("mu must be nonnegative");
  if (table_.size() != expert_.size() * num_actions_) {
    throw std::invalid_argument("feedback table has the wrong shape");
  }
  for (double z : table_) {
    if (!std::isfinite(z)) throw std::invalid_argument("feedback table entry is not finite");
  }
}

ExpertFeedback make_feedback(const LayeredMdp& mdp, const DeterministicPolicy& expert,
                             FeedbackKind kind, std::optional<double> mu) {
  const auto advantage = advantage_of_expert(mdp, expert);
  double recover = 0.0;
  for (double adv : advantage) recover = std::max(recover, std::abs(adv));
  const double bound = mu.value_or(recover);
  const std::size_t num_actions = mdp.num_actions();

  std::vector<double> table(mdp.num_states() * num_actions, 0.0);
  if (kind == FeedbackKind::kZeroOne) {
    for (StateIndex s = 0; s < mdp.num_states(); ++s) {
      for (ActionIndex a = 0; a < num_actions; ++a) {
        table[s * num_actions + a] = a == expert(s) ? 0.0 : bound;
      }
    }
  } else {
    table = advantage;
  }
  if (auto bad = find_sandwich_violation(advantage, table, expert, bound, num_actions)) {
    throw std::invalid_argument("feedback violates A^E <= zeta <= mu*1{a != expert} at state " +
                                std::to_string(bad->first) + ", action " +
                                std::to_string(bad->second) + " (mu below recoverability " +
                                std::to_string(recover) + "?)");
  }
  return ExpertFeedback(kind, bound, expert, std::move(table), num_actions);
}

double round_loss_exact(const LayeredMdp& mdp, const ExpertFeedback& feedback,
                        const StochasticPolicy& roll, const StochasticPolicy& eval) {
  const auto occ = occupancy(mdp, roll);
  if (eval.num_states() != mdp.num_states() || eval.num_actions() != mdp.num_actions()) {
    throw std::invalid_argument("policy dimensions do not match the MDP");
  }
  double total = 0.0;
  for (StateIndex s = 0; s < mdp.num_states(); ++s) {
    const double mass = occ.averaged[s];
    if (mass == 0.0) continue;
    const auto dist = eval.action_dist(s);
    const auto zeta = feedback.row(s);
    double inner = 0.0;
    for (ActionIndex a = 0; a < dist.size(); ++a) inner += dist[a] * zeta[a];
    total += mass * inner;
  }
  return total;
}

double imitation_loss_exact(const LayeredMdp& mdp, const ExpertFeedback& feedback,
                            const StochasticPolicy& pi) {
  return round_loss_exact(mdp, feedback, pi, pi);
}

double LinearLoss::dot(const MixedWeight& u) const {
  if (u.size() != values.size()) throw std::invalid_argument("loss/weight size mismatch");
  double total = 0.0;
  for (std::size_t h = 0; h < values.size(); ++h) total += values[h] * u[h];
  return total;
}

LinearLoss theta_from_occupancy(const ExpertFeedback& feedback, const PolicyClass& policies,
                                const OccupancyProfile& occ) {
  LinearLoss theta{std::vector<double>(policies.size(), 0.0)};
  for (std::size_t h = 0; h < policies.size(); ++h) {
    const auto& actions = policies[h].actions;
    double total = 0.0;
    for (StateIndex s = 0; s < actions.size(); ++s) {
      const double mass = occ.averaged[s];
      if (mass != 0.0) total += mass * feedback(s, actions[s]);
    }
    theta.values[h] = total;
  }
  return theta;
}

LinearLoss theta_exact(const LayeredMdp& mdp, const ExpertFeedback& feedback,
                       const PolicyClass& policies, const MixedWeight& u) {
  policies.check_compatible(mdp);
  return theta_from_occupancy(feedback, policies, occupancy(mdp, mixed_policy(policies, u)));
}

Dataset sample_dataset(const LayeredMdp& mdp, const ExpertFeedback& feedback,
                       const StochasticPolicy& roll, std::size_t num_examples, Rng& rng) {
  if (num_examples == 0) throw std::invalid_argument("sample size K must be at least 1");
  if (roll.num_states() != mdp.num_states() || roll.num_actions() != mdp.num_actions()) {
    throw std::invalid_argument("policy dimensions do not match the MDP");
  }
  Dataset out;
  out.examples.reserve(num_examples);
  std::uniform_int_distribution<std::size_t> step_dist(0, mdp.horizon() - 1);
  for (std::size_t k = 0; k < num_examples; ++k) {
    // Draw the annotated step first; the trajectory beyond it is never observed.
    const std::size_t t = step_dist(rng);
    StateIndex s = mdp.layer(0)[sample_index(mdp.rho(), rng)];
    for (std::size_t step = 0; step < t; ++step) {
      const ActionIndex a = sample_index(roll.action_dist(s), rng);
      s = mdp.layer(step + 1)[sample_index(mdp.transition(s, a), rng)];
    }
    const auto zeta = feedback.row(s);
    out.examples.push_back(CscExample{s, std::vector<double>(zeta.begin(), zeta.end())});
  }
  return out;
}

Dataset sample_dataset(const LayeredMdp& mdp, const ExpertFeedback& feedback,
                       const StochasticPolicy& roll, std::size_t num_examples,
                       std::uint64_t seed) {
  Rng rng(seed);
  return sample_dataset(mdp, feedback, roll, num_examples, rng);
}

LinearLoss linear_loss_of(const Dataset& dataset, const PolicyClass& policies) {
  if (dataset.empty()) throw std::invalid_argument("linear loss of an empty dataset");
  CostAggregate agg(policies);
  agg.add(dataset);
  LinearLoss g{std::vector<double>(agg.totals().begin(), agg.totals().end())};
  const double inv = 1.0 / static_cast<double>(dataset.size());
  for (double& v : g.values) v *= inv;
  return g;
}

}  // namespace coil
