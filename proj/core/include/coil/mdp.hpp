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

#ifndef COIL_MDP_HPP_
#define COIL_MDP_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace coil {

using StateIndex = std::size_t;
using ActionIndex = std::size_t;
using Rng = std::mt19937_64;

// Absolute tolerance for probability normalization and exact-DP identities.
inline constexpr double kProbTolerance = 1e-9;

// Raw, unvalidated description of a layered episodic MDP. States are indexed
// globally in layer order. Transition rows are dense over ALL global states so
// that layering violations are representable (and rejected by validate_mdp).
struct MdpData {
  std::size_t num_actions = 0;
  // layers[t] holds the names of the states in layer t (0-based step).
  std::vector<std::vector<std::string>> layers;
  // Initial distribution over layer 0, one entry per layer-0 state.
  std::vector<double> rho;
  // transitions[t][i][a] is a distribution over all global states, for the
  // i-th state of layer t, t < H-1.
  std::vector<std::vector<std::vector<std::vector<double>>>> transitions;
  // cost[s][a] for every global state s.
  std::vector<std::vector<double>> cost;
};

struct MdpViolation {
  std::string message;
  std::optional<std::size_t> step;
  std::optional<StateIndex> state;
  std::optional<ActionIndex> action;
};

// Returns the first violated invariant, or nullopt when `data` is well formed.
std::optional<MdpViolation> validate_mdp(const MdpData& data);

// Immutable, validated layered MDP. Transition rows are stored compactly over
// the next layer's states (local indices).
class LayeredMdp {
 public:
  // Throws std::invalid_argument carrying the violation message.
  explicit LayeredMdp(MdpData data);

  std::size_t horizon() const { return layer_states_.size(); }
  std::size_t num_states() const { return step_of_.size(); }
  std::size_t num_actions() const { return num_actions_; }

  std::span<const StateIndex> layer(std::size_t t) const { return layer_states_[t]; }
  std::size_t step_of(StateIndex s) const { return step_of_[s]; }
  std::size_t local_index(StateIndex s) const { return local_of_[s]; }
  const std::string& state_name(StateIndex s) const { return names_[s]; }

  // Initial distribution over layer 0 (local indices).
  std::span<const double> rho() const { return rho_; }
  // Distribution over layer step_of(s)+1 (local indices); empty on the last layer.
  std::span<const double> transition(StateIndex s, ActionIndex a) const;
  double cost(StateIndex s, ActionIndex a) const { return cost_[s * num_actions_ + a]; }
  double cost_min() const { return cost_min_; }
  double cost_max() const { return cost_max_; }

  // Re-expands the compact representation (for serialization).
  MdpData to_data() const;

 private:
  std::size_t num_actions_;
  std::vector<std::vector<StateIndex>> layer_states_;
  std::vector<std::size_t> step_of_;
  std::vector<std::size_t> local_of_;
  std::vector<std::string> names_;
  std::vector<double> rho_;
  std::vector<std::vector<double>> next_;  // indexed by s * A + a
  std::vector<double> cost_;
  double cost_min_ = 0.0;
  double cost_max_ = 0.0;
};

// A stationary deterministic policy: one action per global state.
struct DeterministicPolicy {
  std::vector<ActionIndex> actions;

  ActionIndex operator()(StateIndex s) const { return actions[s]; }
  std::size_t size() const { return actions.size(); }
  friend bool operator==(const DeterministicPolicy&, const DeterministicPolicy&) = default;
};

// Dense pi(a|s) table. Deterministic and mixed policies both present this view.
class StochasticPolicy {
 public:
  // `probs` is row-major S x A. Throws std::invalid_argument if a row is not a
  // distribution within kProbTolerance.
  StochasticPolicy(std::size_t num_states, std::size_t num_actions, std::vector<double> probs);

  static StochasticPolicy from_deterministic(const DeterministicPolicy& policy,
                                             std::size_t num_actions);
  static StochasticPolicy uniform(std::size_t num_states, std::size_t num_actions);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  std::span<const double> action_dist(StateIndex s) const {
    return {probs_.data() + s * num_actions_, num_actions_};
  }
  double prob(StateIndex s, ActionIndex a) const { return probs_[s * num_actions_ + a]; }

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> probs_;
};

struct OccupancyProfile {
  // per_step[t][i]: probability of the i-th state of layer t at step t.
  std::vector<std::vector<double>> per_step;
  // averaged[s] = (1/H) * per_step[step(s)][local(s)], over global states.
  std::vector<double> averaged;
};

struct ValueProfile {
  std::vector<double> value;      // V(s)
  std::vector<double> q;          // Q(s, a), row-major S x A
  std::vector<double> advantage;  // Q(s, a) - V(s)
  double expected_cost = 0.0;     // J
  std::size_t num_actions = 0;

  double q_at(StateIndex s, ActionIndex a) const { return q[s * num_actions + a]; }
  double advantage_at(StateIndex s, ActionIndex a) const { return advantage[s * num_actions + a]; }
};

struct Trajectory {
  std::vector<StateIndex> states;
  std::vector<ActionIndex> actions;
};

OccupancyProfile occupancy(const LayeredMdp& mdp, const StochasticPolicy& pi);

// Backward induction. The last layer has Q(s, a) = c(s, a).
ValueProfile evaluate(const LayeredMdp& mdp, const StochasticPolicy& pi);

// H * E_{s~d_pi} E_{a~pi(.|s)}[f(s, a)] for an S x A table f, accumulated
// step by step so that no 1/H rounding is introduced.
double horizon_weighted_expectation(const LayeredMdp& mdp, const OccupancyProfile& occ,
                                    const StochasticPolicy& pi, std::span<const double> table);

// A^E(s, a) as a row-major S x A table.
std::vector<double> advantage_of_expert(const LayeredMdp& mdp, const DeterministicPolicy& expert);

// max_{s,a} |A^E(s, a)|.
double recoverability(const LayeredMdp& mdp, const DeterministicPolicy& expert);

Trajectory rollout(const LayeredMdp& mdp, const StochasticPolicy& pi, std::uint64_t seed);
Trajectory rollout(const LayeredMdp& mdp, const StochasticPolicy& pi, Rng& rng);

// Inverse-CDF draw from a (possibly unnormalized within tolerance) distribution.
std::size_t sample_index(std::span<const double> probs, Rng& rng);

// Sums a global-state distribution by logical label: the part of each state
// name before '@' (e.g. "S_L@3" -> "S_L"). Labels are returned in first-seen order.
struct LabeledMass {
  std::vector<std::string> labels;
  std::vector<double> mass;
  double at(const std::string& label) const;
};
LabeledMass aggregate_by_label(const LayeredMdp& mdp, std::span<const double> dist);

}  // namespace coil

#endif  // COIL_MDP_HPP_
