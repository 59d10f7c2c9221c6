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

#ifndef COIL_OLO_HPP_
#define COIL_OLO_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coil/imitation.hpp"
#include "coil/mdp.hpp"
#include "coil/policy_class.hpp"

namespace coil {

// splitmix64 finalizer applied to (base, stream); used for per-round and
// per-draw seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// u[h] proportional to exp(-eta * G[h]), shifted by the minimum exponent.
MixedWeight hedge_step(const LinearLoss& cumulative, double eta);

// Entropy-regularized optimistic FTRL: u proportional to exp(-eta * (G + hint)).
MixedWeight optimistic_ftrl_entropy_step(const LinearLoss& cumulative, const LinearLoss& hint,
                                         double eta);

// ell[x * A + a] ~ N(0, 1) for each separator state x.
struct PerturbationDraw {
  std::size_t num_actions = 0;
  std::vector<double> ell;

  // q(ell)[h] = sum over separator states x of ell_x(h(x)).
  double q(const DeterministicPolicy& h, std::span<const StateIndex> separator) const;
};

PerturbationDraw draw_perturbation(std::size_t separator_size, std::size_t num_actions, Rng& rng);

struct MftplParams {
  double eta = 1.0;
  std::size_t T = 1;
  std::size_t K = 1;
  // Set when a schedule's precondition on N does not hold.
  std::optional<std::string> warning;

  // Throws std::invalid_argument unless eta > 0, T >= 1 and K >= 1.
  void validate() const;
};

// (1/T) * sum_j Onehot(oracle(history U Z_j)) with
// Z_j = {(x, (K/eta) * ell_{x,j}) : x in separator}. Exactly T oracle calls.
// The result depends only on `seed`, not on `threads`.
MixedWeight mftpl(const CscOracle& oracle, const CostAggregate& history,
                  const VerifiedSeparator& separator, const MftplParams& params,
                  std::uint64_t seed, std::size_t threads = 1);
MixedWeight mftpl(const CscOracle& oracle, std::span<const Dataset> datasets,
                  const VerifiedSeparator& separator, const MftplParams& params,
                  std::uint64_t seed, std::size_t threads = 1);

// Average of M one-hot draws of argmax_h (-eta * Sigma_h / K + q(ell)[h]),
// where Sigma_h is the history's total cost for h. No oracle calls.
MixedWeight mc_ftpl_reference(const PolicyClass& policies, const CostAggregate& history,
                              const VerifiedSeparator& separator, double eta, std::size_t K,
                              std::size_t draws, std::uint64_t seed);

// eta = (1/(mu sqrt(N A))) (ln B / X)^{1/4}, T = ceil(N ln(2NS/delta) / sqrt(X^3 ln B)), K = 1.
MftplParams mftpl_default_params(std::size_t N, std::size_t S, std::size_t A, std::size_t B,
                                 std::size_t X, double mu, double delta);

// eta = 1/(5 mu H A X), T = ceil(N^2 ln(8NS/delta) / (mu H A X^3 ln B)),
// K = ceil(N ln(8NB/delta) / (H^2 A sqrt(X^3 ln B))). Warns when
// N < mu H A sqrt(X^3 ln B).
MftplParams mftpl_eg_default_params(std::size_t N, std::size_t S, std::size_t A, std::size_t B,
                                    std::size_t X, double mu, std::size_t H, double delta);

struct MftplEgRound {
  MixedWeight provisional;
  Dataset extra;
  MixedWeight final_weight;
};

// Provisional weight from history, K extra annotations under it, then the
// final weight from history plus the extra data. 2T oracle calls.
MftplEgRound mftpl_eg_round(const CscOracle& oracle, const CostAggregate& history,
                            const LayeredMdp& mdp, const ExpertFeedback& feedback,
                            const VerifiedSeparator& separator, const MftplParams& params,
                            std::uint64_t seed, std::size_t threads = 1);

}  // namespace coil

#endif  // COIL_OLO_HPP_
