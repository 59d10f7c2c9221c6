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

#include "coil/olo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace coil {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

MixedWeight softmin(std::span<const double> exponent) {
  const double shift = *std::min_element(exponent.begin(), exponent.end());
  std::vector<double> w(exponent.size());
  double z = 0.0;
  for (std::size_t h = 0; h < w.size(); ++h) {
    w[h] = std::exp(-(exponent[h] - shift));
    z += w[h];
  }
  for (double& v : w) v /= z;
  return MixedWeight(std::move(w));
}

void require_positive_eta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument("learning rate eta must be positive and finite");
  }
}

}  // namespace

MixedWeight hedge_step(const LinearLoss& cumulative, double eta) {
  require_positive_eta(eta);
  if (cumulative.size() == 0) throw std::invalid_argument("empty loss vector");
  std::vector<double> exponent(cumulative.size());
  for (std::size_t h = 0; h < exponent.size(); ++h) exponent[h] = eta * cumulative[h];
  return softmin(exponent);
}

MixedWeight optimistic_ftrl_entropy_step(const LinearLoss& cumulative, const LinearLoss& hint,
                                         double eta) {
  require_positive_eta(eta);
  if (cumulative.size() == 0 || hint.size() != cumulative.size()) {
    throw std::invalid_argument("loss and hint sizes must match");
  }
  std::vector<double> exponent(cumulative.size());
  for (std::size_t h = 0; h < exponent.size(); ++h) {
    exponent[h] = eta * (cumulative[h] + hint[h]);
  }
  return softmin(exponent);
}

double PerturbationDraw::q(const DeterministicPolicy& h,
                           std::span<const StateIndex> separator) const {
  double total = 0.0;
  for (std::size_t i = 0; i < separator.size(); ++i) {
    total += ell[i * num_actions + h(separator[i])];
  }
  return total;
}

PerturbationDraw draw_perturbation(std::size_t separator_size, std::size_t num_actions, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  PerturbationDraw out{num_actions, std::vector<double>(separator_size * num_actions)};
  for (double& v : out.ell) v = normal(rng);
  return out;
}

void MftplParams::validate() const {
  require_positive_eta(eta);
  if (T < 1) throw std::invalid_argument("sparsification parameter T must be at least 1");
  if (K < 1) throw std::invalid_argument("sample budget K must be at least 1");
}

MixedWeight mftpl(const CscOracle& oracle, const CostAggregate& history,
                  const VerifiedSeparator& separator, const MftplParams& params,
                  std::uint64_t seed, std::size_t threads) {
  params.validate();
  const PolicyClass& cls = oracle.policies();
  const auto states = separator.states();
  const std::size_t num_actions = cls.num_actions();
  const double scale = static_cast<double>(params.K) / params.eta;

  // All normals are drawn up front from one stream so that the split of the
  // T oracle calls across threads cannot change the result.
  const std::size_t width = states.size() * num_actions;
  std::vector<double> noise(params.T * width);
  {
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : noise) v = scale * normal(rng);
  }

  std::vector<std::size_t> picks(params.T);
  auto worker = [&](std::size_t begin, std::size_t end) {
    std::vector<CscExample> z(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
      z[i].state = states[i];
      z[i].cost.resize(num_actions);
    }
    for (std::size_t j = begin; j < end; ++j) {
      const double* row = noise.data() + j * width;
      for (std::size_t i = 0; i < z.size(); ++i) {
        std::copy(row + i * num_actions, row + (i + 1) * num_actions, z[i].cost.begin());
      }
      picks[j] = oracle(history, z);
    }
  };

  threads = std::clamp<std::size_t>(threads, 1, params.T);
  if (threads == 1) {
    worker(0, params.T);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (params.T + threads - 1) / threads;
    for (std::size_t begin = 0; begin < params.T; begin += chunk) {
      pool.emplace_back(worker, begin, std::min(params.T, begin + chunk));
    }
    for (auto& t : pool) t.join();
  }

  std::vector<double> counts(cls.size(), 0.0);
  for (std::size_t h : picks) counts[h] += 1.0;
  for (double& c : counts) c /= static_cast<double>(params.T);
  return MixedWeight(std::move(counts));
}

MixedWeight mftpl(const CscOracle& oracle, std::span<const Dataset> datasets,
                  const VerifiedSeparator& separator, const MftplParams& params,
                  std::uint64_t seed, std::size_t threads) {
  CostAggregate history(oracle.policies());
  for (const auto& d : datasets) history.add(d);
  return mftpl(oracle, history, separator, params, seed, threads);
}

MixedWeight mc_ftpl_reference(const PolicyClass& policies, const CostAggregate& history,
                              const VerifiedSeparator& separator, double eta, std::size_t K,
                              std::size_t draws, std::uint64_t seed) {
  require_positive_eta(eta);
  if (draws < 1) throw std::invalid_argument("reference needs at least one draw");
  if (K < 1) throw std::invalid_argument("sample budget K must be at least 1");
  const auto states = separator.states();
  const auto totals = history.totals();
  std::vector<double> base(policies.size());
  for (std::size_t h = 0; h < base.size(); ++h) {
    base[h] = -eta * totals[h] / static_cast<double>(K);
  }
  Rng rng(seed);
  std::vector<double> counts(policies.size(), 0.0);
  for (std::size_t m = 0; m < draws; ++m) {
    const auto draw = draw_perturbation(states.size(), policies.num_actions(), rng);
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < policies.size(); ++h) {
      const double score = base[h] + draw.q(policies[h], states);
      if (score > best_score) {
        best = h;
        best_score = score;
      }
    }
    counts[best] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(draws);
  return MixedWeight(std::move(counts));
}

namespace {

void check_schedule_inputs(std::size_t N, std::size_t S, std::size_t A, std::size_t B,
                           std::size_t X, double mu, double delta) {
  if (N == 0 || S == 0 || A == 0 || X == 0) {
    throw std::invalid_argument("N, S, A and X must be positive");
  }
  if (B < 2) {
    throw std::invalid_argument(
        "B = 1 makes ln B = 0 and the schedule undefined; any fixed eta works for a single policy");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
}

std::size_t ceil_count(double x) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(x)));
}

}  // namespace

MftplParams mftpl_default_params(std::size_t N, std::size_t S, std::size_t A, std::size_t B,
                                 std::size_t X, double mu, double delta) {
  check_schedule_inputs(N, S, A, B, X, mu, delta);
  delta = std::min(delta, 1.0);
  const double n = static_cast<double>(N);
  const double x = static_cast<double>(X);
  const double log_b = std::log(static_cast<double>(B));
  MftplParams p;
  p.eta = std::pow(log_b / x, 0.25) / (mu * std::sqrt(n * static_cast<double>(A)));
  p.T = ceil_count(n * std::log(2.0 * n * static_cast<double>(S) / delta) /
                   std::sqrt(x * x * x * log_b));
  p.K = 1;
  return p;
}

MftplParams mftpl_eg_default_params(std::size_t N, std::size_t S, std::size_t A, std::size_t B,
                                    std::size_t X, double mu, std::size_t H, double delta) {
  check_schedule_inputs(N, S, A, B, X, mu, delta);
  if (H == 0) throw std::invalid_argument("H must be positive");
  delta = std::min(delta, 1.0);
  const double n = static_cast<double>(N);
  const double a = static_cast<double>(A);
  const double h = static_cast<double>(H);
  const double x = static_cast<double>(X);
  const double log_b = std::log(static_cast<double>(B));
  const double root = std::sqrt(x * x * x * log_b);
  MftplParams p;
  p.eta = 1.0 / (5.0 * mu * h * a * x);
  p.T = ceil_count(n * n * std::log(8.0 * n * static_cast<double>(S) / delta) /
                   (mu * h * a * x * x * x * log_b));
  p.K = ceil_count(n * std::log(8.0 * n * static_cast<double>(B) / delta) / (h * h * a * root));
  const double threshold = mu * h * a * root;
  if (n < threshold) {
    p.warning = "N = " + std::to_string(N) + " is below mu*H*A*sqrt(X^3 ln B) = " +
                std::to_string(threshold) + "; the regret guarantee does not apply";
  }
  return p;
}

MftplEgRound mftpl_eg_round(const CscOracle& oracle, const CostAggregate& history,
                            const LayeredMdp& mdp, const ExpertFeedback& feedback,
                            const VerifiedSeparator& separator, const MftplParams& params,
                            std::uint64_t seed, std::size_t threads) {
  const PolicyClass& cls = oracle.policies();
  MixedWeight provisional =
      mftpl(oracle, history, separator, params, derive_seed(seed, 0), threads);
  Dataset extra = sample_dataset(mdp, feedback, mixed_policy(cls, provisional), params.K,
                                 derive_seed(seed, 1));
  CostAggregate augmented = history;
  augmented.add(extra);
  MixedWeight final_weight =
      mftpl(oracle, augmented, separator, params, derive_seed(seed, 2), threads);
  return MftplEgRound{std::move(provisional), std::move(extra), std::move(final_weight)};
}

}  // namespace coil
