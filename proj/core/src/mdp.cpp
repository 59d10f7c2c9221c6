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

#include "coil/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace coil {

namespace {

std::string describe(const MdpViolation& v) {
  std::ostringstream out;
  out << v.message;
  if (v.step) out << " (step " << *v.step;
  if (v.state) out << (v.step ? ", " : " (") << "state " << *v.state;
  if (v.action) out << ", action " << *v.action;
  if (v.step || v.state) out << ")";
  return out.str();
}

MdpViolation violation(std::string message, std::optional<std::size_t> step = std::nullopt,
                       std::optional<StateIndex> state = std::nullopt,
                       std::optional<ActionIndex> action = std::nullopt) {
  return MdpViolation{std::move(message), step, state, action};
}

}  // namespace

std::optional<MdpViolation> validate_mdp(const MdpData& data) {
  const std::size_t horizon = data.layers.size();
  const std::size_t num_actions = data.num_actions;
  if (horizon == 0) return violation("MDP has no layers");
  if (num_actions == 0) return violation("MDP has no actions");

  std::vector<std::size_t> first_of_layer(horizon + 1, 0);
  for (std::size_t t = 0; t < horizon; ++t) {
    if (data.layers[t].empty()) return violation("empty layer", t);
    first_of_layer[t + 1] = first_of_layer[t] + data.layers[t].size();
  }
  const std::size_t num_states = first_of_layer[horizon];

  if (data.rho.size() != data.layers[0].size()) {
    return violation("rho must have one entry per state of the first layer");
  }
  double rho_sum = 0.0;
  for (std::size_t i = 0; i < data.rho.size(); ++i) {
    if (!std::isfinite(data.rho[i]) || data.rho[i] < 0.0) {
      return violation("rho entry is negative or not finite", 0, i);
    }
    rho_sum += data.rho[i];
  }
  if (std::abs(rho_sum - 1.0) > kProbTolerance) return violation("rho does not sum to 1", 0);

  if (data.transitions.size() != horizon - 1) {
    return violation("transitions must be given for steps 1..H-1");
  }
  for (std::size_t t = 0; t + 1 < horizon; ++t) {
    if (data.transitions[t].size() != data.layers[t].size()) {
      return violation("transition block size does not match layer size", t);
    }
    for (std::size_t i = 0; i < data.layers[t].size(); ++i) {
      const StateIndex s = first_of_layer[t] + i;
      if (data.transitions[t][i].size() != num_actions) {
        return violation("transition entry needs one row per action", t, s);
      }
      for (ActionIndex a = 0; a < num_actions; ++a) {
        const auto& row = data.transitions[t][i][a];
        if (row.size() != num_states) {
          return violation("transition row length must equal the state count", t, s, a);
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < num_states; ++j) {
          if (!std::isfinite(row[j]) || row[j] < 0.0) {
            return violation("transition probability is negative or not finite", t, s, a);
          }
          const bool in_next_layer = j >= first_of_layer[t + 1] && j < first_of_layer[t + 2];
          if (!in_next_layer && row[j] > 0.0) {
            return violation("layering violated: transition leaves the next layer", t, s, a);
          }
          sum += row[j];
        }
        if (std::abs(sum - 1.0) > kProbTolerance) {
          return violation("transition row does not sum to 1", t, s, a);
        }
      }
    }
  }

  if (data.cost.size() != num_states) return violation("cost needs one row per state");
  for (StateIndex s = 0; s < num_states; ++s) {
    if (data.cost[s].size() != num_actions) {
      return violation("cost row needs one entry per action", std::nullopt, s);
    }
    for (ActionIndex a = 0; a < num_actions; ++a) {
      if (!std::isfinite(data.cost[s][a])) {
        return violation("cost is not finite", std::nullopt, s, a);
      }
    }
  }
  return std::nullopt;
}

LayeredMdp::LayeredMdp(MdpData data) {
  if (auto v = validate_mdp(data)) throw std::invalid_argument(describe(*v));
  num_actions_ = data.num_actions;
  const std::size_t horizon = data.layers.size();
  layer_states_.resize(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t i = 0; i < data.layers[t].size(); ++i) {
      layer_states_[t].push_back(names_.size());
      step_of_.push_back(t);
      local_of_.push_back(i);
      names_.push_back(data.layers[t][i]);
    }
  }
  rho_ = std::move(data.rho);
  const std::size_t num_states = names_.size();
  next_.resize(num_states * num_actions_);
  for (std::size_t t = 0; t + 1 < horizon; ++t) {
    const StateIndex first_next = layer_states_[t + 1].front();
    const std::size_t next_size = layer_states_[t + 1].size();
    for (std::size_t i = 0; i < layer_states_[t].size(); ++i) {
      const StateIndex s = layer_states_[t][i];
      for (ActionIndex a = 0; a < num_actions_; ++a) {
        const auto& row = data.transitions[t][i][a];
        next_[s * num_actions_ + a].assign(row.begin() + first_next,
                                           row.begin() + first_next + next_size);
      }
    }
  }
  cost_.reserve(num_states * num_actions_);
  cost_min_ = std::numeric_limits<double>::infinity();
  cost_max_ = -std::numeric_limits<double>::infinity();
  for (const auto& row : data.cost) {
    for (double c : row) {
      cost_.push_back(c);
      cost_min_ = std::min(cost_min_, c);
      cost_max_ = std::max(cost_max_, c);
    }
  }
}

std::span<const double> LayeredMdp::transition(StateIndex s, ActionIndex a) const {
  return next_[s * num_actions_ + a];
}

MdpData LayeredMdp::to_data() const {
  MdpData data;
  data.num_actions = num_actions_;
  const std::size_t horizon = layer_states_.size();
  const std::size_t num_states = names_.size();
  data.layers.resize(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    for (StateIndex s : layer_states_[t]) data.layers[t].push_back(names_[s]);
  }
  data.rho = rho_;
  data.transitions.resize(horizon - 1);
  for (std::size_t t = 0; t + 1 < horizon; ++t) {
    const StateIndex first_next = layer_states_[t + 1].front();
    for (StateIndex s : layer_states_[t]) {
      std::vector<std::vector<double>> rows(num_actions_, std::vector<double>(num_states, 0.0));
      for (ActionIndex a = 0; a < num_actions_; ++a) {
        const auto& compact = next_[s * num_actions_ + a];
        std::copy(compact.begin(), compact.end(), rows[a].begin() + first_next);
      }
      data.transitions[t].push_back(std::move(rows));
    }
  }
  data.cost.resize(num_states);
  for (StateIndex s = 0; s < num_states; ++s) {
    data.cost[s].assign(cost_.begin() + s * num_actions_, cost_.begin() + (s + 1) * num_actions_);
  }
  return data;
}

StochasticPolicy::StochasticPolicy(std::size_t num_states, std::size_t num_actions,
                                   std::vector<double> probs)
    : num_states_(num_states), num_actions_(num_actions), probs_(std::move(probs)) {
  if (num_actions_ == 0 || probs_.size() != num_states_ * num_actions_) {
    throw std::invalid_argument("policy table has the wrong shape");
  }
  for (StateIndex s = 0; s < num_states_; ++s) {
    double sum = 0.0;
    for (ActionIndex a = 0; a < num_actions_; ++a) {
      const double p = probs_[s * num_actions_ + a];
      if (!(p >= 0.0)) throw std::invalid_argument("policy probability is negative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kProbTolerance) {
      throw std::invalid_argument("policy row " + std::to_string(s) + " does not sum to 1");
    }
  }
}

StochasticPolicy StochasticPolicy::from_deterministic(const DeterministicPolicy& policy,
                                                      std::size_t num_actions) {
  std::vector<double> probs(policy.size() * num_actions, 0.0);
  for (StateIndex s = 0; s < policy.size(); ++s) {
    if (policy(s) >= num_actions) throw std::invalid_argument("policy action out of range");
    probs[s * num_actions + policy(s)] = 1.0;
  }
  return StochasticPolicy(policy.size(), num_actions, std::move(probs));
}

StochasticPolicy StochasticPolicy::uniform(std::size_t num_states, std::size_t num_actions) {
  return StochasticPolicy(num_states, num_actions,
                          std::vector<double>(num_states * num_actions, 1.0 / num_actions));
}

namespace {

void check_dims(const LayeredMdp& mdp, const StochasticPolicy& pi) {
  if (pi.num_states() != mdp.num_states() || pi.num_actions() != mdp.num_actions()) {
    throw std::invalid_argument("policy dimensions do not match the MDP");
  }
}

}  // namespace

OccupancyProfile occupancy(const LayeredMdp& mdp, const StochasticPolicy& pi) {
  check_dims(mdp, pi);
  const std::size_t horizon = mdp.horizon();
  OccupancyProfile occ;
  occ.per_step.resize(horizon);
  occ.per_step[0].assign(mdp.rho().begin(), mdp.rho().end());
  for (std::size_t t = 0; t + 1 < horizon; ++t) {
    auto& next = occ.per_step[t + 1];
    next.assign(mdp.layer(t + 1).size(), 0.0);
    const auto states = mdp.layer(t);
    for (std::size_t i = 0; i < states.size(); ++i) {
      const double mass = occ.per_step[t][i];
      if (mass == 0.0) continue;
      const StateIndex s = states[i];
      const auto dist = pi.action_dist(s);
      for (ActionIndex a = 0; a < mdp.num_actions(); ++a) {
        const double flow = mass * dist[a];
        if (flow == 0.0) continue;
        const auto row = mdp.transition(s, a);
        for (std::size_t j = 0; j < row.size(); ++j) next[j] += flow * row[j];
      }
    }
  }
  occ.averaged.assign(mdp.num_states(), 0.0);
  const double inv_h = 1.0 / static_cast<double>(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    const auto states = mdp.layer(t);
    for (std::size_t i = 0; i < states.size(); ++i) {
      occ.averaged[states[i]] = occ.per_step[t][i] * inv_h;
    }
  }
  return occ;
}

ValueProfile evaluate(const LayeredMdp& mdp, const StochasticPolicy& pi) {
  check_dims(mdp, pi);
  const std::size_t num_states = mdp.num_states();
  const std::size_t num_actions = mdp.num_actions();
  ValueProfile vp;
  vp.num_actions = num_actions;
  vp.value.assign(num_states, 0.0);
  vp.q.assign(num_states * num_actions, 0.0);
  vp.advantage.assign(num_states * num_actions, 0.0);
  for (std::size_t t = mdp.horizon(); t-- > 0;) {
    for (StateIndex s : mdp.layer(t)) {
      double v = 0.0;
      const auto dist = pi.action_dist(s);
      for (ActionIndex a = 0; a < num_actions; ++a) {
        double q = mdp.cost(s, a);
        if (t + 1 < mdp.horizon()) {
          const auto row = mdp.transition(s, a);
          const auto next_states = mdp.layer(t + 1);
          for (std::size_t j = 0; j < row.size(); ++j) q += row[j] * vp.value[next_states[j]];
        }
        vp.q[s * num_actions + a] = q;
        v += dist[a] * q;
      }
      vp.value[s] = v;
      for (ActionIndex a = 0; a < num_actions; ++a) {
        vp.advantage[s * num_actions + a] = vp.q[s * num_actions + a] - v;
      }
    }
  }
  const auto first = mdp.layer(0);
  for (std::size_t i = 0; i < first.size(); ++i) vp.expected_cost += mdp.rho()[i] * vp.value[first[i]];
  return vp;
}

double horizon_weighted_expectation(const LayeredMdp& mdp, const OccupancyProfile& occ,
                                    const StochasticPolicy& pi, std::span<const double> table) {
  const std::size_t num_actions = mdp.num_actions();
  if (table.size() != mdp.num_states() * num_actions) {
    throw std::invalid_argument("table dimensions do not match the MDP");
  }
  double total = 0.0;
  for (std::size_t t = 0; t < mdp.horizon(); ++t) {
    const auto states = mdp.layer(t);
    for (std::size_t i = 0; i < states.size(); ++i) {
      const double mass = occ.per_step[t][i];
      if (mass == 0.0) continue;
      const StateIndex s = states[i];
      const auto dist = pi.action_dist(s);
      double inner = 0.0;
      for (ActionIndex a = 0; a < num_actions; ++a) inner += dist[a] * table[s * num_actions + a];
      total += mass * inner;
    }
  }
  return total;
}

std::vector<double> advantage_of_expert(const LayeredMdp& mdp, const DeterministicPolicy& expert) {
  if (expert.size() != mdp.num_states()) {
    throw std::invalid_argument("expert policy does not cover the MDP states");
  }
  return evaluate(mdp, StochasticPolicy::from_deterministic(expert, mdp.num_actions())).advantage;
}

double recoverability(const LayeredMdp& mdp, const DeterministicPolicy& expert) {
  double mu = 0.0;
  for (double adv : advantage_of_expert(mdp, expert)) mu = std::max(mu, std::abs(adv));
  return mu;
}

std::size_t sample_index(std::span<const double> probs, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cumulative += probs[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  // Rounding left the cumulative sum just below 1.
  return last_positive;
}

Trajectory rollout(const LayeredMdp& mdp, const StochasticPolicy& pi, Rng& rng) {
  check_dims(mdp, pi);
  Trajectory tau;
  tau.states.reserve(mdp.horizon());
  tau.actions.reserve(mdp.horizon());
  StateIndex s = mdp.layer(0)[sample_index(mdp.rho(), rng)];
  for (std::size_t t = 0; t < mdp.horizon(); ++t) {
    const ActionIndex a = sample_index(pi.action_dist(s), rng);
    tau.states.push_back(s);
    tau.actions.push_back(a);
    if (t + 1 < mdp.horizon()) s = mdp.layer(t + 1)[sample_index(mdp.transition(s, a), rng)];
  }
  return tau;
}

Trajectory rollout(const LayeredMdp& mdp, const StochasticPolicy& pi, std::uint64_t seed) {
  Rng rng(seed);
  return rollout(mdp, pi, rng);
}

double LabeledMass::at(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return mass[i];
  }
  return 0.0;
}

LabeledMass aggregate_by_label(const LayeredMdp& mdp, std::span<const double> dist) {
  LabeledMass out;
  std::unordered_map<std::string, std::size_t> slot;
  for (StateIndex s = 0; s < mdp.num_states(); ++s) {
    const std::string& name = mdp.state_name(s);
    std::string label = name.substr(0, name.find('@'));
    auto [it, inserted] = slot.try_emplace(label, out.labels.size());
    if (inserted) {
      out.labels.push_back(label);
      out.mass.push_back(0.0);
    }
    out.mass[it->second] += dist[s];
  }
  return out;
}

}  // namespace coil
