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

#ifndef COIL_POLICY_CLASS_HPP_
#define COIL_POLICY_CLASS_HPP_

#include <atomic>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "coil/mdp.hpp"

namespace coil {

// A cost-sensitive classification example (x, c): a state and a cost per action.
struct CscExample {
  StateIndex state = 0;
  std::vector<double> cost;
};

// Ordered multiset of CSC examples; expectations are uniform averages over it.
struct Dataset {
  std::vector<CscExample> examples;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
};

// Ordered finite class of deterministic policies. The index is the identity.
class PolicyClass {
 public:
  PolicyClass(std::vector<DeterministicPolicy> policies, std::size_t num_actions);

  std::size_t size() const { return policies_.size(); }
  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  const DeterministicPolicy& operator[](std::size_t h) const { return policies_[h]; }
  std::span<const DeterministicPolicy> policies() const { return policies_; }

  // Index pairs (h, h') with h < h' that are the same function.
  std::vector<std::pair<std::size_t, std::size_t>> duplicate_pairs() const;
  bool all_distinct() const { return duplicate_pairs().empty(); }

  // Throws std::invalid_argument unless every policy is total on `mdp`.
  void check_compatible(const LayeredMdp& mdp) const;

 private:
  std::vector<DeterministicPolicy> policies_;
  std::size_t num_states_;
  std::size_t num_actions_;
};

// A point of the simplex over a policy class.
class MixedWeight {
 public:
  // Entries in [-1e-12, 0) are clamped to zero; the sum must be within 1e-9 of
  // one and is then renormalized. Throws std::invalid_argument otherwise.
  explicit MixedWeight(std::vector<double> weights);

  static MixedWeight uniform(std::size_t size);
  static MixedWeight onehot(std::size_t size, std::size_t index);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t h) const { return weights_[h]; }
  std::span<const double> values() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// pi_u(a|s) = sum of u[h] over policies h with h(s) = a.
std::vector<double> mixed_action_dist(const PolicyClass& policies, const MixedWeight& u,
                                      StateIndex s);
StochasticPolicy mixed_policy(const PolicyClass& policies, const MixedWeight& u);

// A multiset of CSC examples summarized by each class policy's total cost.
// The oracle only needs these totals, so history can be folded in once.
class CostAggregate {
 public:
  explicit CostAggregate(const PolicyClass& policies);

  void add(const CscExample& example);
  void add(const Dataset& dataset);

  std::span<const double> totals() const { return totals_; }
  std::size_t count() const { return count_; }

 private:
  const PolicyClass* policies_;
  std::vector<double> totals_;
  std::size_t count_ = 0;
};

// Exact empirical-cost minimizer over the class. Ties go to the lowest index.
// Every invocation is counted.
class CscOracle {
 public:
  explicit CscOracle(const PolicyClass& policies) : policies_(&policies) {}
  CscOracle(const CscOracle&) = delete;
  CscOracle& operator=(const CscOracle&) = delete;

  const PolicyClass& policies() const { return *policies_; }

  // Throws std::invalid_argument on an empty multiset.
  std::size_t operator()(std::span<const CscExample> examples) const;
  // Oracle on the union of an aggregated multiset and extra examples.
  std::size_t operator()(const CostAggregate& base, std::span<const CscExample> extra) const;

  std::size_t calls() const { return calls_.load(std::memory_order_relaxed); }
  void reset_calls() { calls_.store(0, std::memory_order_relaxed); }

 private:
  const PolicyClass* policies_;
  mutable std::atomic<std::size_t> calls_{0};
};

struct SeparatorSet {
  std::vector<StateIndex> states;
  std::size_t size() const { return states.size(); }
};

// First pair (h, h') of functionally distinct policies that agree on all of
// `separator`, or nullopt when the set separates the class.
std::optional<std::pair<std::size_t, std::size_t>> verify_separator(const PolicyClass& policies,
                                                                   const SeparatorSet& separator);

// A separator that has passed verify_separator for a specific class.
class VerifiedSeparator {
 public:
  // Throws std::invalid_argument with the offending pair.
  static VerifiedSeparator verify(const PolicyClass& policies, SeparatorSet separator);

  const SeparatorSet& set() const { return set_; }
  std::span<const StateIndex> states() const { return set_.states; }
  std::size_t size() const { return set_.size(); }

 private:
  explicit VerifiedSeparator(SeparatorSet set) : set_(std::move(set)) {}
  SeparatorSet set_;
};

// Greedy set cover of the policy pairs by states drawn from `candidates`.
// Throws std::invalid_argument when two policies are the same function.
SeparatorSet greedy_separator(const PolicyClass& policies, std::span<const StateIndex> candidates);
SeparatorSet greedy_separator(const PolicyClass& policies);

// ceil(log_A(B)): no separator of a class of B distinct policies is smaller.
std::size_t separator_lower_bound(std::size_t num_policies, std::size_t num_actions);

}  // namespace coil

#endif  // COIL_POLICY_CLASS_HPP_
