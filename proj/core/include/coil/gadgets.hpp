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

#ifndef COIL_GADGETS_HPP_
#define COIL_GADGETS_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coil/imitation.hpp"
#include "coil/mdp.hpp"
#include "coil/policy_class.hpp"

namespace coil {

// Two-state-per-layer instance on which every proper learner has linear
// regret. Logical states S_0, S_L, S_R; layer t >= 2 holds "S_L@t" and "S_R@t".
struct CoverInstance {
  LayeredMdp mdp;
  DeterministicPolicy expert;
  PolicyClass policies;  // {h_L, h_R}
  std::optional<std::string> note;
};

inline constexpr ActionIndex kLeft = 0;
inline constexpr ActionIndex kRight = 1;

// Throws std::invalid_argument for H < 2. H = 2 carries a note: the zero-one
// lower bound needs H >= 3.
CoverInstance make_cover_mdp(std::size_t H);

// m x m payoff matrices, row-major. Entries must lie in [0, 1].
struct BimatrixGame {
  std::size_t m = 0;
  std::vector<double> V;
  std::vector<double> W;

  double v(std::size_t i, std::size_t j) const { return V[i * m + j]; }
  double w(std::size_t i, std::size_t j) const { return W[i * m + j]; }
  // Throws std::invalid_argument on a shape error or an entry outside [0, 1].
  void validate() const;
};

inline constexpr double kReductionLambda = 54.0;

struct ReductionInstance {
  std::size_t m = 0;
  LayeredMdp mdp;
  DeterministicPolicy expert;        // always the last action a_A
  ExpertFeedback feedback;           // advantage form
  PolicyClass policies;              // 2m constant policies h_j = a_j
  std::vector<double> C;             // 2m x 2m, row-major
  double lambda = kReductionLambda;

  std::size_t num_policies() const { return 2 * m; }
};

// Three-layer tree: S_0 -> S_i on a_i -> S_{i,j} on a_j, costs on the leaves.
ReductionInstance map_f(const BimatrixGame& game);

// (1/3) * C * u.
std::vector<double> theta_closed_form(const ReductionInstance& instance, const MixedWeight& u);

struct StrategyPair {
  std::vector<double> x;
  std::vector<double> y;
};

struct BalanceReport {
  double mass_x = 0.0;
  double mass_y = 0.0;
  double product = 0.0;
  bool flagged = false;  // product < 2/9
};

// Split u into its first and second halves.
BalanceReport balance_check(std::span<const double> u);

// Normalizes each half of u. Throws std::invalid_argument when a half carries
// no mass.
StrategyPair map_g(std::span<const double> u);

// max over both players of the best unilateral improvement.
double nash_gap(const BimatrixGame& game, std::span<const double> x, std::span<const double> y);

// <theta, u> - min_h theta[h].
double vi_gap(std::span<const double> theta, std::span<const double> u);

// lhs = sum_h u[h] (J(h) - J(pi^E)); rhs = H * E_{d_{pi_u}} E_{a~pi_u}[A^E(s, a)].
// Both are accumulated per step.
std::pair<double, double> alt_mixture_discrepancy(std::size_t H, std::span<const double> u);
std::pair<double, double> alt_mixture_discrepancy(std::size_t H);

}  // namespace coil

#endif  // COIL_GADGETS_HPP_
