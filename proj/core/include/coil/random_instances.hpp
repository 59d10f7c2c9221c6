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

#ifndef COIL_RANDOM_INSTANCES_HPP_
#define COIL_RANDOM_INSTANCES_HPP_

#include <cstddef>
#include <vector>

#include "coil/gadgets.hpp"
#include "coil/mdp.hpp"
#include "coil/policy_class.hpp"

namespace coil {

struct RandomMdpOptions {
  std::vector<std::size_t> layer_sizes{1, 3, 3};
  std::size_t num_actions = 2;
  double cost_min = 0.0;
  double cost_max = 1.0;
  // Each transition row gets at most this many successors (0 means the whole layer).
  std::size_t max_support = 0;
};

LayeredMdp random_mdp(const RandomMdpOptions& options, Rng& rng);

// Uniform point of the simplex (Dirichlet(1, ..., 1)).
std::vector<double> random_simplex(std::size_t size, Rng& rng);
// Dirichlet(1) rows.
StochasticPolicy random_stochastic_policy(std::size_t num_states, std::size_t num_actions, Rng& rng);
DeterministicPolicy random_deterministic_policy(std::size_t num_states, std::size_t num_actions,
                                                Rng& rng);
// B pairwise distinct deterministic policies; throws if A^S < B.
PolicyClass random_distinct_class(std::size_t num_policies, std::size_t num_states,
                                  std::size_t num_actions, Rng& rng);
// Entries uniform on [0, 1].
BimatrixGame random_game(std::size_t m, Rng& rng);

}  // namespace coil

#endif  // COIL_RANDOM_INSTANCES_HPP_
