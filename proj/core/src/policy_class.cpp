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

#include "coil/policy_class.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace coil {

PolicyClass::PolicyClass(std::vector<DeterministicPolicy> policies, std::size_t num_actions)
    : policies_(std::move(policies)), num_actions_(num_actions) {
  if (policies_.empty()) throw std::invalid_argument("policy class must be nonempty");
  num_states_ = policies_.front().size();
  for (const auto& h : policies_) {
    if (h.size() != num_states_) {
      throw std::invalid_argument("all class policies must cover the same states");
    }
    for (ActionIndex a : h.actions) {
      if (a >= num_actions_) throw std::invalid_argument("class policy action out of range");
    }
  }
}

std::vector<std::pair<std::size_t, std::size_t>> PolicyClass::duplicate_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t h = 0; h < size(); ++h) {
    for (std::size_t k = h + 1; k < size(); ++k) {
      if (policies_[h] == policies_[k]) out.emplace_back(h, k);
    }
  }
  return out;
}

void PolicyClass::check_compatible(const LayeredMdp& mdp) const {
  if (num_states_ != mdp.num_states() || num_actions_ != mdp.num_actions()) {
    throw std::invalid_argument("policy class dimensions do not match the MDP");
  }
}

MixedWeight::MixedWeight(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("mixed weight must be nonempty");
  double sum = 0.0;
  for (double& w : weights_) {
    if (!std::isfinite(w) || w < -1e-12) {
      throw std::invalid_argument("mixed weight entry is negative or not finite");
    }
    if (w < 0.0) w = 0.0;
    sum += w;
  }
  if (std::abs(sum - 1.0) > kProbTolerance) {
    throw std::invalid_argument("mixed weight does not sum to 1");
  }
  for (double& w : weights_) w /= sum;
}

MixedWeight MixedWeight::uniform(std::size_t size) {
  return MixedWeight(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

MixedWeight MixedWeight::onehot(std::size_t size, std::size_t index) {
  std::vector<double> w(size, 0.0);
  w.at(index) = 1.0;
  return MixedWeight(std::move(w));
}

std::vector<double> mixed_action_dist(const PolicyClass& policies, const MixedWeight& u,
                                      StateIndex s) {
  if (u.size() != policies.size()) throw std::invalid_argument("weight/class size mismatch");
  std::vector<double> dist(policies.num_actions(), 0.0);
  for (std::size_t h = 0; h < policies.size(); ++h) dist[policies[h](s)] += u[h];
  return dist;
}

StochasticPolicy mixed_policy(const PolicyClass& policies, const MixedWeight& u) {
  if (u.size() != policies.size()) throw std::invalid_argument("weight/class size mismatch");
  const std::size_t num_actions = policies.num_actions();
  std::vector<double> probs(policies.num_states() * num_actions, 0.0);
  for (std::size_t h = 0; h < policies.size(); ++h) {
    if (u[h] == 0.0) continue;
    const auto& actions = policies[h].actions;
    for (StateIndex s = 0; s < actions.size(); ++s) probs[s * num_actions + actions[s]] += u[h];
  }
  return StochasticPolicy(policies.num_states(), num_actions, std::move(probs));
}

CostAggregate::CostAggregate(const PolicyClass& policies)
    : policies_(&policies), totals_(policies.size(), 0.0) {}

void CostAggregate::add(const CscExample& example) {
  if (example.cost.size() != policies_->num_actions()) {
    throw std::invalid_argument("example cost vector has the wrong length");
  }
  for (std::size_t h = 0; h < totals_.size(); ++h) {
    totals_[h] += example.cost[(*policies_)[h](example.state)];
  }
  ++count_;
}

void CostAggregate::add(const Dataset& dataset) {
  for (const auto& ex : dataset.examples) add(ex);
}

namespace {

std::size_t argmin_first(std::span<const double> totals) {
  std::size_t best = 0;
  for (std::size_t h = 1; h < totals.size(); ++h) {
    if (totals[h] < totals[best]) best = h;
  }
  return best;
}

}  // namespace

std::size_t CscOracle::operator()(std::span<const CscExample> examples) const {
  if (examples.empty()) throw std::invalid_argument("CSC oracle called on an empty multiset");
  CostAggregate agg(*policies_);
  for (const auto& ex : examples) agg.add(ex);
  calls_.fetch_add(1, std::memory_order_relaxed);
  return argmin_first(agg.totals());
}

std::size_t CscOracle::operator()(const CostAggregate& base,
                                  std::span<const CscExample> extra) const {
  if (base.count() == 0 && extra.empty()) {
    throw std::invalid_argument("CSC oracle called on an empty multiset");
  }
  const PolicyClass& cls = *policies_;
  const auto totals = base.totals();
  std::size_t best = 0;
  double best_cost = 0.0;
  for (std::size_t h = 0; h < cls.size(); ++h) {
    double cost = totals[h];
    const auto& actions = cls[h].actions;
    for (const auto& ex : extra) cost += ex.cost[actions[ex.state]];
    if (h == 0 || cost < best_cost) {
      best = h;
      best_cost = cost;
    }
  }
  calls_.fetch_add(1, std::memory_order_relaxed);
  return best;
}

std::optional<std::pair<std::size_t, std::size_t>> verify_separator(const PolicyClass& policies,
                                                                   const SeparatorSet& separator) {
  for (StateIndex x : separator.states) {
    if (x >= policies.num_states()) throw std::invalid_argument("separator state out of range");
  }
  for (std::size_t h = 0; h < policies.size(); ++h) {
    for (std::size_t k = h + 1; k < policies.size(); ++k) {
      if (policies[h] == policies[k]) continue;
      const bool separated = std::any_of(separator.states.begin(), separator.states.end(),
                                         [&](StateIndex x) { return policies[h](x) != policies[k](x); });
      if (!separated) return std::make_pair(h, k);
    }
  }
  return std::nullopt;
}

VerifiedSeparator VerifiedSeparator::verify(const PolicyClass& policies, SeparatorSet separator) {
  auto sorted = separator.states;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("separator states must be distinct");
  }
  if (auto pair = verify_separator(policies, separator)) {
    throw std::invalid_argument("separator fails to distinguish policies " +
                                std::to_string(pair->first) + " and " +
                                std::to_string(pair->second));
  }
  return VerifiedSeparator(std::move(separator));
}

SeparatorSet greedy_separator(const PolicyClass& policies, std::span<const StateIndex> candidates) {
  if (!policies.all_distinct()) {
    throw std::invalid_argument("no separator exists: the class contains duplicate policies");
  }
  std::vector<std::pair<std::size_t, std::size_t>> uncovered;
  for (std::size_t h = 0; h < policies.size(); ++h) {
    for (std::size_t k = h + 1; k < policies.size(); ++k) uncovered.emplace_back(h, k);
  }
  SeparatorSet out;
  std::vector<bool> used(candidates.size(), false);
  while (!uncovered.empty()) {
    std::size_t best = candidates.size();
    std::size_t best_gain = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) continue;
      const StateIndex x = candidates[c];
      std::size_t gain = 0;
      for (auto [h, k] : uncovered) gain += policies[h](x) != policies[k](x) ? 1 : 0;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    if (best == candidates.size()) {
      throw std::invalid_argument("candidate states cannot separate the class");
    }
    used[best] = true;
    const StateIndex x = candidates[best];
    out.states.push_back(x);
    std::erase_if(uncovered, [&](const auto& p) { return policies[p.first](x) != policies[p.second](x); });
  }
  return out;
}

SeparatorSet greedy_separator(const PolicyClass& policies) {
  std::vector<StateIndex> all(policies.num_states());
  std::iota(all.begin(), all.end(), StateIndex{0});
  return greedy_separator(policies, all);
}

std::size_t separator_lower_bound(std::size_t num_policies, std::size_t num_actions) {
  if (num_policies <= 1) return 0;
  if (num_actions <= 1) throw std::invalid_argument("a single action cannot separate policies");
  std::size_t k = 0;
  std::size_t reach = 1;
  while (reach < num_policies) {
    reach *= num_actions;
    ++k;
  }
  return k;
}

}  // namespace coil
