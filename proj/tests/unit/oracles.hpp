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

#ifndef COIL_TESTS_ORACLES_HPP_
#define COIL_TESTS_ORACLES_HPP_

// Reference computations that share no code with the library: trajectory
// enumeration, brute-force minimizers and small instance builders.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "coil/imitation.hpp"
#include "coil/mdp.hpp"
#include "coil/policy_class.hpp"
#include "coil/random_instances.hpp"

namespace coil::testing {

using PathVisitor = std::function<void(double, const std::vector<StateIndex>&,
                                       const std::vector<ActionIndex>&)>;

// Calls `visit(prob, states, actions)` once per trajectory of positive probability.
inline void enumerate_paths(const LayeredMdp& mdp, const StochasticPolicy& pi,
                            const PathVisitor& visit) {
  std::vector<StateIndex> states;
  std::vector<ActionIndex> actions;
  std::function<void(double)> step = [&](double prob) {
    const StateIndex s = states.back();
    const std::size_t t = states.size() - 1;
    for (ActionIndex a = 0; a < mdp.num_actions(); ++a) {
      const double pa = prob * pi.prob(s, a);
      if (pa == 0.0) continue;
      actions.push_back(a);
      if (t + 1 == mdp.horizon()) {
        visit(pa, states, actions);
      } else {
        const auto next = mdp.transition(s, a);
        for (std::size_t k = 0; k < next.size(); ++k) {
          if (next[k] == 0.0) continue;
          states.push_back(mdp.layer(t + 1)[k]);
          step(pa * next[k]);
          states.pop_back();
        }
      }
      actions.pop_back();
    }
  };
  const auto first = mdp.layer(0);
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (mdp.rho()[i] == 0.0) continue;
    states.assign(1, first[i]);
    step(mdp.rho()[i]);
  }
}

// J by enumeration.
inline double enumerated_cost(const LayeredMdp& mdp, const StochasticPolicy& pi) {
  double j = 0.0;
  enumerate_paths(mdp, pi, [&](double p, const auto& ss, const auto& as) {
    double c = 0.0;
    for (std::size_t t = 0; t < ss.size(); ++t) c += mdp.cost(ss[t], as[t]);
    j += p * c;
  });
  return j;
}

// Averaged occupancy by enumeration.
inline std::vector<double> enumerated_occupancy(const LayeredMdp& mdp, const StochasticPolicy& pi) {
  std::vector<double> d(mdp.num_states(), 0.0);
  const double H = static_cast<double>(mdp.horizon());
  enumerate_paths(mdp, pi, [&](double p, const auto& ss, const auto&) {
    for (StateIndex s : ss) d[s] += p / H;
  });
  return d;
}

// theta(u)[h] by enumeration of the trajectories of pi_u.
inline std::vector<double> enumerated_theta(const LayeredMdp& mdp, const ExpertFeedback& fb,
                                            const PolicyClass& cls, const MixedWeight& u) {
  const auto d = enumerated_occupancy(mdp, mixed_policy(cls, u));
  std::vector<double> theta(cls.size(), 0.0);
  for (std::size_t h = 0; h < cls.size(); ++h) {
    for (StateIndex s = 0; s < mdp.num_states(); ++s) theta[h] += d[s] * fb(s, cls[h](s));
  }
  return theta;
}

inline LayeredMdp small_mdp(Rng& rng, double cost_min = -1.0, double cost_max = 1.0) {
  std::uniform_int_distribution<std::size_t> horizon(2, 4), width(1, 3), actions(2, 3);
  RandomMdpOptions opt;
  opt.layer_sizes.clear();
  const std::size_t H = horizon(rng);
  for (std::size_t t = 0; t < H; ++t) opt.layer_sizes.push_back(width(rng));
  opt.num_actions = actions(rng);
  opt.cost_min = cost_min;
  opt.cost_max = cost_max;
  return random_mdp(opt, rng);
}

inline PolicyClass small_class(std::size_t B, const LayeredMdp& mdp, Rng& rng) {
  std::vector<DeterministicPolicy> hs;
  for (std::size_t h = 0; h < B; ++h) {
    hs.push_back(random_deterministic_policy(mdp.num_states(), mdp.num_actions(), rng));
  }
  return PolicyClass(std::move(hs), mdp.num_actions());
}

// Lowest-index minimizer of the summed example costs.
inline std::size_t brute_force_argmin(const PolicyClass& cls, const std::vector<CscExample>& data) {
  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t h = 0; h < cls.size(); ++h) {
    double c = 0.0;
    for (const auto& ex : data) c += ex.cost[cls[h](ex.state)];
    if (c < best_cost) {
      best_cost = c;
      best = h;
    }
  }
  return best;
}

}  // namespace coil::testing

#endif  // COIL_TESTS_ORACLES_HPP_
