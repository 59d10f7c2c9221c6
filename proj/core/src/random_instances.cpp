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

#include "coil/random_instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace coil {

std::vector<double> random_simplex(std::size_t size, Rng& rng) {
  if (size == 0) throw std::invalid_argument("simplex dimension must be positive");
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> out(size);
  double total = 0.0;
  for (double& v : out) {
    v = expo(rng);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

LayeredMdp random_mdp(const RandomMdpOptions& options, Rng& rng) {
  if (options.layer_sizes.empty()) throw std::invalid_argument("need at least one layer");
  MdpData data;
  data.num_actions = options.num_actions;
  std::vector<std::size_t> offsets;
  std::size_t S = 0;
  for (std::size_t t = 0; t < options.layer_sizes.size(); ++t) {
    offsets.push_back(S);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < options.layer_sizes[t]; ++i) {
      names.push_back("s" + std::to_string(t + 1) + "_" + std::to_string(i));
    }
    S += names.size();
    data.layers.push_back(std::move(names));
  }
  data.rho = random_simplex(options.layer_sizes.front(), rng);
  for (std::size_t t = 0; t + 1 < options.layer_sizes.size(); ++t) {
    const std::size_t next = options.layer_sizes[t + 1];
    const std::size_t support =
        options.max_support == 0 ? next : std::min(options.max_support, next);
    std::vector<std::vector<std::vector<double>>> layer_rows;
    for (std::size_t i = 0; i < options.layer_sizes[t]; ++i) {
      std::vector<std::vector<double>> rows;
      for (ActionIndex a = 0; a < options.num_actions; ++a) {
        std::vector<std::size_t> targets(next);
        std::iota(targets.begin(), targets.end(), std::size_t{0});
        std::shuffle(targets.begin(), targets.end(), rng);
        const auto probs = random_simplex(support, rng);
        std::vector<double> row(S, 0.0);
        for (std::size_t k = 0; k < support; ++k) row[offsets[t + 1] + targets[k]] = probs[k];
        rows.push_back(std::move(row));
      }
      layer_rows.push_back(std::move(rows));
    }
    data.transitions.push_back(std::move(layer_rows));
  }
  std::uniform_real_distribution<double> cost(options.cost_min, options.cost_max);
  data.cost.assign(S, std::vector<double>(options.num_actions));
  for (auto& row : data.cost) {
    for (double& c : row) c = cost(rng);
  }
  return LayeredMdp(std::move(data));
}

StochasticPolicy random_stochastic_policy(std::size_t num_states, std::size_t num_actions,
                                          Rng& rng) {
  std::vector<double> probs;
  probs.reserve(num_states * num_actions);
  for (std::size_t s = 0; s < num_states; ++s) {
    const auto row = random_simplex(num_actions, rng);
    probs.insert(probs.end(), row.begin(), row.end());
  }
  return StochasticPolicy(num_states, num_actions, std::move(probs));
}

DeterministicPolicy random_deterministic_policy(std::size_t num_states, std::size_t num_actions,
                                                Rng& rng) {
  std::uniform_int_distribution<ActionIndex> pick(0, num_actions - 1);
  DeterministicPolicy out{std::vector<ActionIndex>(num_states)};
  for (auto& a : out.actions) a = pick(rng);
  return out;
}

PolicyClass random_distinct_class(std::size_t num_policies, std::size_t num_states,
                                  std::size_t num_actions, Rng& rng) {
  const double capacity = static_cast<double>(num_states) * std::log(static_cast<double>(num_actions));
  if (num_actions < 2 ? num_policies > 1 : std::log(static_cast<double>(num_policies)) > capacity + 1e-12) {
    throw std::invalid_argument("not enough distinct deterministic policies");
  }
  std::vector<DeterministicPolicy> out;
  while (out.size() < num_policies) {
    auto h = random_deterministic_policy(num_states, num_actions, rng);
    if (std::find(out.begin(), out.end(), h) == out.end()) out.push_back(std::move(h));
  }
  return PolicyClass(std::move(out), num_actions);
}

BimatrixGame random_game(std::size_t m, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BimatrixGame g{m, std::vector<double>(m * m), std::vector<double>(m * m)};
  for (double& v : g.V) v = unit(rng);
  for (double& w : g.W) w = unit(rng);
  return g;
}

}  // namespace coil
