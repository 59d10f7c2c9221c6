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

#include "coil/gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace coil {

namespace {

// Offsets of each layer's first global index.
std::vector<std::size_t> layer_offsets(const MdpData& data) {
  std::vector<std::size_t> out;
  std::size_t at = 0;
  for (const auto& layer : data.layers) {
    out.push_back(at);
    at += layer.size();
  }
  out.push_back(at);
  return out;
}

void allocate(MdpData& data) {
  const auto offsets = layer_offsets(data);
  const std::size_t S = offsets.back();
  data.transitions.assign(data.layers.size() - 1, {});
  for (std::size_t t = 0; t + 1 < data.layers.size(); ++t) {
    data.transitions[t].assign(data.layers[t].size(),
                               std::vector<std::vector<double>>(
                                   data.num_actions, std::vector<double>(S, 0.0)));
  }
  data.cost.assign(S, std::vector<double>(data.num_actions, 0.0));
}

}  // namespace

CoverInstance make_cover_mdp(std::size_t H) {
  if (H < 2) throw std::invalid_argument("the cover MDP needs H >= 2");
  MdpData data;
  data.num_actions = 2;
  data.layers.push_back({"S_0"});
  for (std::size_t t = 2; t <= H; ++t) {
    data.layers.push_back({"S_L@" + std::to_string(t), "S_R@" + std::to_string(t)});
  }
  data.rho = {1.0};
  allocate(data);

  // Global indices: S_0 = 0, then (S_L, S_R) pairs layer by layer.
  auto left = [](std::size_t t) { return 1 + 2 * (t - 1); };
  auto right = [](std::size_t t) { return 2 + 2 * (t - 1); };
  data.transitions[0][0][kLeft][left(1)] = 1.0;
  data.transitions[0][0][kRight][right(1)] = 1.0;
  for (std::size_t t = 1; t + 1 < H; ++t) {
    for (ActionIndex a = 0; a < 2; ++a) {
      data.transitions[t][0][a][left(t + 1)] = 1.0;
      data.transitions[t][1][a][right(t + 1)] = 1.0;
    }
  }

  std::vector<ActionIndex> expert(1 + 2 * (H - 1));
  expert[0] = kLeft;
  for (std::size_t t = 1; t < H; ++t) {
    data.cost[left(t)][kLeft] = 1.0;
    data.cost[right(t)][kRight] = 1.0;
    expert[left(t)] = kRight;
    expert[right(t)] = kLeft;
  }

  const std::size_t S = expert.size();
  PolicyClass policies({DeterministicPolicy{std::vector<ActionIndex>(S, kLeft)},
                        DeterministicPolicy{std::vector<ActionIndex>(S, kRight)}},
                       2);
  CoverInstance out{LayeredMdp(std::move(data)), DeterministicPolicy{std::move(expert)},
                    std::move(policies), std::nullopt};
  if (H == 2) out.note = "H = 2: the zero-one feedback lower bound N(H-2)/(2H) is vacuous";
  return out;
}

void BimatrixGame::validate() const {
  if (m == 0) throw std::invalid_argument("game needs m >= 1");
  if (V.size() != m * m || W.size() != m * m) {
    throw std::invalid_argument("payoff matrices must be m x m");
  }
  for (const auto* mat : {&V, &W}) {
    for (double e : *mat) {
      if (!(e >= 0.0 && e <= 1.0)) {
        throw std::invalid_argument("game is not positively normalized: entry " +
                                    std::to_string(e) + " outside [0, 1]");
      }
    }
  }
}

ReductionInstance map_f(const BimatrixGame& game) {
  game.validate();
  const std::size_t m = game.m;
  const std::size_t A = 2 * m + 1;
  const double lambda = kReductionLambda;

  MdpData data;
  data.num_actions = A;
  data.layers.push_back({"S_0"});
  std::vector<std::string> mid, leaves;
  for (std::size_t i = 1; i <= A; ++i) {
    mid.push_back("S_" + std::to_string(i));
    for (std::size_t j = 1; j <= A; ++j) {
      leaves.push_back("S_" + std::to_string(i) + "," + std::to_string(j));
    }
  }
  data.layers.push_back(std::move(mid));
  data.layers.push_back(std::move(leaves));
  data.rho = {1.0};
  allocate(data);

  auto mid_index = [](std::size_t i) { return 1 + i; };
  auto leaf_index = [A](std::size_t i, std::size_t j) { return 1 + A + i * A + j; };
  for (std::size_t i = 0; i < A; ++i) {
    data.transitions[0][0][i][mid_index(i)] = 1.0;
    for (std::size_t j = 0; j < A; ++j) data.transitions[1][i][j][leaf_index(i, j)] = 1.0;
  }

  // Leaf cost, 0-based: x-half is [0, m), y-half is [m, 2m), a_A is 2m.
  auto leaf_cost = [&](std::size_t i, std::size_t j) {
    if (i == A - 1 || j == A - 1) return 0.0;
    const bool i_x = i < m;
    const bool j_x = j < m;
    if (!i_x && j_x) return -game.v(j, i - m);
    if (i_x && !j_x) return -game.w(i, j - m);
    return lambda;
  };
  for (std::size_t i = 0; i < A; ++i) {
    for (std::size_t j = 0; j < A; ++j) {
      std::fill(data.cost[leaf_index(i, j)].begin(), data.cost[leaf_index(i, j)].end(),
                leaf_cost(i, j));
    }
  }

  LayeredMdp mdp(std::move(data));
  DeterministicPolicy expert{std::vector<ActionIndex>(mdp.num_states(), A - 1)};
  ExpertFeedback feedback = make_feedback(mdp, expert, FeedbackKind::kAdvantage);
  std::vector<DeterministicPolicy> constants;
  for (ActionIndex a = 0; a < 2 * m; ++a) {
    constants.push_back(DeterministicPolicy{std::vector<ActionIndex>(mdp.num_states(), a)});
  }
  PolicyClass policies(std::move(constants), A);

  // theta_j = (1/3) sum_i C[j][i] u_i with C[j][i] the cost of leaf S_{i,j}.
  std::vector<double> C(4 * m * m);
  for (std::size_t j = 0; j < 2 * m; ++j) {
    for (std::size_t i = 0; i < 2 * m; ++i) C[j * 2 * m + i] = leaf_cost(i, j);
  }
  return ReductionInstance{m,          std::move(mdp), std::move(expert), std::move(feedback),
                           std::move(policies), std::move(C), lambda};
}

std::vector<double> theta_closed_form(const ReductionInstance& instance, const MixedWeight& u) {
  const std::size_t B = instance.num_policies();
  if (u.size() != B) throw std::invalid_argument("weight size must be 2m");
  std::vector<double> theta(B, 0.0);
  for (std::size_t j = 0; j < B; ++j) {
    double total = 0.0;
    for (std::size_t i = 0; i < B; ++i) total += instance.C[j * B + i] * u[i];
    theta[j] = total / 3.0;
  }
  return theta;
}

BalanceReport balance_check(std::span<const double> u) {
  if (u.empty() || u.size() % 2 != 0) throw std::invalid_argument("balance needs an even class");
  const std::size_t m = u.size() / 2;
  BalanceReport r;
  r.mass_x = std::accumulate(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(m), 0.0);
  r.mass_y = std::accumulate(u.begin() + static_cast<std::ptrdiff_t>(m), u.end(), 0.0);
  r.product = r.mass_x * r.mass_y;
  r.flagged = r.product < 2.0 / 9.0;
  return r;
}

StrategyPair map_g(std::span<const double> u) {
  const BalanceReport r = balance_check(u);
  if (!(r.mass_x > 0.0) || !(r.mass_y > 0.0)) {
    throw std::invalid_argument("map g is undefined: half masses are " +
                                std::to_string(r.mass_x) + " and " + std::to_string(r.mass_y) +
                                "; a VI solution needs a product of at least 2/9");
  }
  const std::size_t m = u.size() / 2;
  StrategyPair out;
  for (std::size_t i = 0; i < m; ++i) {
    out.x.push_back(u[i] / r.mass_x);
    out.y.push_back(u[m + i] / r.mass_y);
  }
  return out;
}

double nash_gap(const BimatrixGame& game, std::span<const double> x, std::span<const double> y) {
  const std::size_t m = game.m;
  if (x.size() != m || y.size() != m) throw std::invalid_argument("strategy length must be m");
  std::vector<double> vy(m, 0.0), wx(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      vy[i] += game.v(i, j) * y[j];
      wx[j] += game.w(i, j) * x[i];
    }
  }
  double row_value = 0.0, col_value = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    row_value += x[i] * vy[i];
    col_value += y[i] * wx[i];
  }
  const double row_gap = *std::max_element(vy.begin(), vy.end()) - row_value;
  const double col_gap = *std::max_element(wx.begin(), wx.end()) - col_value;
  return std::max(row_gap, col_gap);
}

double vi_gap(std::span<const double> theta, std::span<const double> u) {
  if (theta.size() != u.size() || theta.empty()) {
    throw std::invalid_argument("theta and u sizes must match");
  }
  double inner = 0.0;
  for (std::size_t h = 0; h < u.size(); ++h) inner += theta[h] * u[h];
  return inner - *std::min_element(theta.begin(), theta.end());
}

std::pair<double, double> alt_mixture_discrepancy(std::size_t H, std::span<const double> u) {
  const CoverInstance cover = make_cover_mdp(H);
  const MixedWeight weight(std::vector<double>(u.begin(), u.end()));
  if (weight.size() != cover.policies.size()) throw std::invalid_argument("u must have 2 entries");
  const std::size_t A = cover.mdp.num_actions();
  const double j_expert =
      evaluate(cover.mdp, StochasticPolicy::from_deterministic(cover.expert, A)).expected_cost;
  double lhs = 0.0;
  for (std::size_t h = 0; h < cover.policies.size(); ++h) {
    if (weight[h] == 0.0) continue;
    const auto pi_h = StochasticPolicy::from_deterministic(cover.policies[h], A);
    lhs += weight[h] * (evaluate(cover.mdp, pi_h).expected_cost - j_expert);
  }
  const StochasticPolicy pi_u = mixed_policy(cover.policies, weight);
  const auto advantage = advantage_of_expert(cover.mdp, cover.expert);
  const double rhs =
      horizon_weighted_expectation(cover.mdp, occupancy(cover.mdp, pi_u), pi_u, advantage);
  return {lhs, rhs};
}

std::pair<double, double> alt_mixture_discrepancy(std::size_t H) {
  const std::vector<double> half{0.5, 0.5};
  return alt_mixture_discrepancy(H, half);
}

}  // namespace coil
