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

#include "coil/harness/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "coil/gadgets.hpp"
#include "coil/imitation.hpp"
#include "coil/logger.hpp"
#include "coil/olo.hpp"
#include "coil/random_instances.hpp"
#include "json.hpp"

namespace coil::harness {

namespace {

constexpr double kExact = 1e-9;

struct Tally {
  explicit Tally(std::string name) { result.name = std::move(name); }
  SuiteResult result;
  void record(bool ok, double stat) {
    ++result.trials;
    if (!ok) ++result.failures;
    result.worst = std::max(result.worst, stat);
  }
  SuiteResult finish(std::string detail = {}) {
    result.passed = result.failures == 0;
    result.detail = std::move(detail);
    return result;
  }
};

LayeredMdp small_random_mdp(Rng& rng) {
  std::uniform_int_distribution<std::size_t> horizon(2, 5), width(1, 4), actions(2, 3);
  RandomMdpOptions opt;
  opt.layer_sizes.clear();
  const std::size_t H = horizon(rng);
  for (std::size_t t = 0; t < H; ++t) opt.layer_sizes.push_back(width(rng));
  opt.num_actions = actions(rng);
  opt.cost_min = -1.0;
  opt.cost_max = 1.0;
  return random_mdp(opt, rng);
}

std::size_t trials_or(const SuiteOptions& o, std::size_t fallback) {
  return o.trials.value_or(fallback);
}

SuiteResult suite_occupancy(const SuiteOptions& o) {
  Tally tally("occupancy");
  Rng rng(o.seed);
  for (std::size_t k = 0; k < trials_or(o, 500); ++k) {
    const auto mdp = small_random_mdp(rng);
    const auto pi = random_stochastic_policy(mdp.num_states(), mdp.num_actions(), rng);
    const auto occ = occupancy(mdp, pi);
    double err = 0.0;
    for (const auto& d : occ.per_step) {
      double total = 0.0;
      for (double p : d) total += p;
      err = std::max(err, std::abs(total - 1.0));
    }
    tally.record(err <= kExact, err);
  }
  return tally.finish("every per-step occupancy sums to 1");
}

SuiteResult suite_j_consistency(const SuiteOptions& o) {
  Tally tally("j_consistency");
  Rng rng(o.seed);
  for (std::size_t k = 0; k < trials_or(o, 500); ++k) {
    const auto mdp = small_random_mdp(rng);
    const auto pi = random_stochastic_policy(mdp.num_states(), mdp.num_actions(), rng);
    std::vector<double> cost(mdp.num_states() * mdp.num_actions());
    for (StateIndex s = 0; s < mdp.num_states(); ++s) {
      for (ActionIndex a = 0; a < mdp.num_actions(); ++a) cost[s * mdp.num_actions() + a] = mdp.cost(s, a);
    }
    const double j = evaluate(mdp, pi).expected_cost;
    const double via_occ = horizon_weighted_expectation(mdp, occupancy(mdp, pi), pi, cost);
    const double err = std::abs(j - via_occ);
    tally.record(err <= kExact, err);
  }
  return tally.finish("|J - H E_d E_pi c| <= 1e-9");
}

SuiteResult suite_pdl(const SuiteOptions& o) {
  Tally tally("pdl");
  Rng rng(o.seed);
  for (std::size_t k = 0; k < trials_or(o, 500); ++k) {
    const auto mdp = small_random_mdp(rng);
    const auto pi = random_stochastic_policy(mdp.num_states(), mdp.num_actions(), rng);
    const auto expert = random_deterministic_policy(mdp.num_states(), mdp.num_actions(), rng);
    const double j_pi = evaluate(mdp, pi).expected_cost;
    const double j_e =
        evaluate(mdp, StochasticPolicy::from_deterministic(expert, mdp.num_actions())).expected_cost;
    const auto adv = advantage_of_expert(mdp, expert);
    const double rhs = horizon_weighted_expectation(mdp, occupancy(mdp, pi), pi, adv);
    const double err = std::abs(j_pi - j_e - rhs);
    tally.record(err <= kExact, err);
  }
  return tally.finish("|J(pi) - J(E) - H E_d E_pi A^E| <= 1e-9");
}

struct RandomImitation {
  LayeredMdp mdp;
  DeterministicPolicy expert;
  ExpertFeedback feedback;
  PolicyClass policies;
};

RandomImitation random_imitation(Rng& rng, std::size_t B) {
  auto mdp = small_random_mdp(rng);
  auto expert = random_deterministic_policy(mdp.num_states(), mdp.num_actions(), rng);
  const auto kind = std::bernoulli_distribution(0.5)(rng) ? FeedbackKind::kZeroOne
                                                          : FeedbackKind::kAdvantage;
  auto feedback = make_feedback(mdp, expert, kind);
  std::vector<DeterministicPolicy> hs;
  for (std::size_t h = 0; h < B; ++h) {
    hs.push_back(random_deterministic_policy(mdp.num_states(), mdp.num_actions(), rng));
  }
  PolicyClass policies(std::move(hs), mdp.num_actions());
  return RandomImitation{std::move(mdp), std::move(expert), std::move(feedback), std::move(policies)};
}

SuiteResult suite_bilinearity(const SuiteOptions& o) {
  Tally tally("bilinearity");
  Rng rng(o.seed);
  for (std::size_t k = 0; k < trials_or(o, 200); ++k) {
    const auto inst = random_imitation(rng, 4);
    const MixedWeight u(random_simplex(4, rng));
    const MixedWeight w(random_simplex(4, rng));
    const double f = round_loss_exact(inst.mdp, inst.feedback, mixed_policy(inst.policies, u),
                                      mixed_policy(inst.policies, w));
    const double err = std::abs(f - theta_exact(inst.mdp, inst.feedback, inst.policies, u).dot(w));
    tally.record(err <= kExact, err);
  }
  return tally.finish("F(pi_u, pi_w) = <theta(u), w>");
}

SuiteResult suite_theta_linearity(const SuiteOptions& o) {
  Tally tally("theta_linearity");
  Rng rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < trials_or(o, 500); ++k) {
    const auto inst = random_imitation(rng, 3);
    const MixedWeight u(random_simplex(3, rng));
    const auto w = random_simplex(3, rng);
    const auto w2 = random_simplex(3, rng);
    const double alpha = unit(rng);
    std::vector<double> mix(3);
    for (std::size_t h = 0; h < 3; ++h) mix[h] = alpha * w[h] + (1 - alpha) * w2[h];
    const auto roll = mixed_policy(inst.policies, u);
    const double lhs =
        round_loss_exact(inst.mdp, inst.feedback, roll, mixed_policy(inst.policies, MixedWeight(mix)));
    const double rhs =
        alpha * round_loss_exact(inst.mdp, inst.feedback, roll, mixed_policy(inst.policies, MixedWeight(w))) +
        (1 - alpha) *
            round_loss_exact(inst.mdp, inst.feedback, roll, mixed_policy(inst.policies, MixedWeight(w2)));
    const double err = std::abs(lhs - rhs);
    tally.record(err <= kExact, err);
  }
  return tally.finish("F(pi_u, .) is linear in the evaluated mixture");
}

SuiteResult suite_continuity(const SuiteOptions& o) {
  Tally tally("continuity");
  Rng rng(o.seed);
  for (std::size_t k = 0; k < trials_or(o, 500); ++k) {
    const auto inst = random_imitation(rng, 4);
    const MixedWeight u(random_simplex(4, rng));
    const MixedWeight v(random_simplex(4, rng));
    const auto tu = theta_exact(inst.mdp, inst.feedback, inst.policies, u);
    const auto tv = theta_exact(inst.mdp, inst.feedback, inst.policies, v);
    double diff = 0.0, l1 = 0.0, per_state = 0.0;
    for (std::size_t h = 0; h < 4; ++h) {
      diff = std::max(diff, std::abs(tu[h] - tv[h]));
      l1 += std::abs(u[h] - v[h]);
    }
    for (StateIndex s = 0; s < inst.mdp.num_states(); ++s) {
      const auto du = mixed_action_dist(inst.policies, u, s);
      const auto dv = mixed_action_dist(inst.policies, v, s);
      double d = 0.0;
      for (std::size_t a = 0; a < du.size(); ++a) d += std::abs(du[a] - dv[a]);
      per_state = std::max(per_state, d);
    }
    const double scale = inst.feedback.mu() * static_cast<double>(inst.mdp.horizon());
    const bool ok = diff <= scale * per_state + 1e-12 && scale * per_state <= scale * l1 + 1e-12;
    tally.record(ok, scale * l1 > 0 ? diff / (scale * l1) : 0.0);
  }
  return tally.finish("||theta(u)-theta(v)||_inf <= mu H max_s ||pi_u-pi_v||_1 <= mu H ||u-v||_1");
}

SuiteResult suite_sandwich(const SuiteOptions& o) {
  Tally tally("sandwich");
  Rng rng(o.seed);
  for (std::size_t k = 0; k < trials_or(o, 200); ++k) {
    const auto mdp = small_random_mdp(rng);
    const auto expert = random_deterministic_policy(mdp.num_states(), mdp.num_actions(), rng);
    const auto adv = advantage_of_expert(mdp, expert);
    const double mu = recoverability(mdp, expert);
    bool ok = true;
    for (auto kind : {FeedbackKind::kZeroOne, FeedbackKind::kAdvantage}) {
      const auto fb = make_feedback(mdp, expert, kind);
      ok = ok && !find_sandwich_violation(adv, fb.table(), expert, mu, mdp.num_actions());
    }
    // Only a positive advantage above the supplied mu breaks the lower bound.
    const double top = *std::max_element(adv.begin(), adv.end());
    if (top > 1e-6) {
      try {
        make_feedback(mdp, expert, FeedbackKind::kZeroOne, 0.5 * top);
        ok = false;
      } catch (const std::invalid_argument&) {
      }
    }
    tally.record(ok, 0.0);
  }
  return tally.finish("A^E <= zeta <= mu 1{a != E}; undersized mu rejected");
}

SuiteResult suite_oracle(const SuiteOptions& o) {
  Tally tally("oracle");
  Rng rng(o.seed);
  std::uniform_real_distribution<double> cost(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> size(1, 20);
  for (std::size_t k = 0; k < trials_or(o, 1000); ++k) {
    const std::size_t S = 6, A = 3, B = 5;
    const auto cls = random_distinct_class(B, S, A, rng);
    std::vector<CscExample> data(size(rng));
    std::uniform_int_distribution<StateIndex> state(0, S - 1);
    for (auto& ex : data) {
      ex.state = state(rng);
      ex.cost = {cost(rng), cost(rng), cost(rng)};
    }
    std::size_t best = 0;
    double best_cost = 0.0;
    for (std::size_t h = 0; h < B; ++h) {
      double c = 0.0;
      for (const auto& ex : data) c += ex.cost[cls[h](ex.state)];
      if (h == 0 || c < best_cost) {
        best = h;
        best_cost = c;
      }
    }
    CscOracle oracle(cls);
    const std::size_t got = oracle(data);
    auto shifted = data;
    for (auto& ex : shifted) {
      for (double& c : ex.cost) c += 0.25;
    }
    tally.record(got == best && oracle(shifted) == got, 0.0);
  }
  return tally.finish("oracle equals exhaustive argmin; invariant to constant shifts");
}

SuiteResult suite_mixed_linearity(const SuiteOptions& o) {
  Tally tally("mixed_linearity");
  Rng rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < trials_or(o, 500); ++k) {
    const auto cls = random_distinct_class(4, 5, 3, rng);
    const auto u = random_simplex(4, rng);
    const auto v = random_simplex(4, rng);
    const double alpha = unit(rng);
    std::vector<double> mix(4);
    for (std::size_t h = 0; h < 4; ++h) mix[h] = alpha * u[h] + (1 - alpha) * v[h];
    double err = 0.0;
    for (StateIndex s = 0; s < 5; ++s) {
      const auto dm = mixed_action_dist(cls, MixedWeight(mix), s);
      const auto du = mixed_action_dist(cls, MixedWeight(u), s);
      const auto dv = mixed_action_dist(cls, MixedWeight(v), s);
      for (std::size_t a = 0; a < 3; ++a) {
        err = std::max(err, std::abs(dm[a] - alpha * du[a] - (1 - alpha) * dv[a]));
      }
    }
    tally.record(err <= 1e-12, err);
  }
  return tally.finish("pi_u(.|s) is linear in u");
}

SuiteResult suite_separator(const SuiteOptions& o) {
  Tally tally("separator");
  Rng rng(o.seed);
  std::uniform_int_distribution<std::size_t> bsize(2, 12);
  for (std::size_t k = 0; k < trials_or(o, 300); ++k) {
    const std::size_t A = 2 + k % 2;
    const auto cls = random_distinct_class(bsize(rng), 8, A, rng);
    const auto sep = greedy_separator(cls);
    const bool ok = !verify_separator(cls, sep) &&
                    sep.size() >= separator_lower_bound(cls.size(), A);
    tally.record(ok, static_cast<double>(sep.size()));
  }
  return tally.finish("greedy separators verify and have |X| >= ceil(log_A B)");
}

SuiteResult suite_unbiasedness(const SuiteOptions& o) {
  Tally tally("unbiasedness");
  Rng rng(o.seed);
  const std::size_t M = 2000, K = 5;
  for (std::size_t k = 0; k < trials_or(o, 20); ++k) {
    const auto inst = random_imitation(rng, 3);
    const MixedWeight u(random_simplex(3, rng));
    const auto pi = mixed_policy(inst.policies, u);
    const auto theta = theta_exact(inst.mdp, inst.feedback, inst.policies, u);
    std::vector<double> mean(3, 0.0);
    for (std::size_t r = 0; r < M; ++r) {
      const auto g = linear_loss_of(sample_dataset(inst.mdp, inst.feedback, pi, K, rng), inst.policies);
      for (std::size_t h = 0; h < 3; ++h) mean[h] += g[h] / static_cast<double>(M);
    }
    const double radius = 4.0 * inst.feedback.mu() / std::sqrt(static_cast<double>(K * M));
    double worst = 0.0;
    bool ok = true;
    for (std::size_t h = 0; h < 3; ++h) {
      const double dev = std::abs(mean[h] - theta[h]);
      ok = ok && dev <= radius + 1e-12;
      if (radius > 0) worst = std::max(worst, dev / radius);
    }
    tally.record(ok, worst);
  }
  return tally.finish("mean of g over M datasets within 4 mu / sqrt(K M) of theta(u)");
}

SuiteResult suite_hedge_regret(const SuiteOptions& o) {
  Tally tally("hedge_regret");
  Rng rng(o.seed);
  const std::size_t N = 1000, B = 4;
  const double eta = std::sqrt(std::log(static_cast<double>(B)) / (2.0 * N));
  const double bound = std::sqrt(2.0 * N * std::log(static_cast<double>(B))) * 1.2;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < trials_or(o, 20); ++k) {
    // Adversarial-ish: the loss penalizes whichever arm Hedge currently favors.
    LinearLoss G{std::vector<double>(B, 0.0)};
    double played = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
      const auto u = hedge_step(G, eta);
      LinearLoss g{std::vector<double>(B)};
      const std::size_t lead = static_cast<std::size_t>(
          std::max_element(u.values().begin(), u.values().end()) - u.values().begin());
      for (std::size_t h = 0; h < B; ++h) g.values[h] = h == lead ? 1.0 : (k % 2 ? unit(rng) : 0.0);
      played += g.dot(u);
      for (std::size_t h = 0; h < B; ++h) G.values[h] += g[h];
    }
    const double lreg = played - *std::min_element(G.values.begin(), G.values.end());
    tally.record(lreg <= bound, lreg / bound);
  }
  return tally.finish("LReg_N <= 1.2 sqrt(2 N ln B) on scripted losses");
}

SuiteResult suite_concentration(const SuiteOptions& o) {
  Tally tally("concentration");
  const std::size_t A = 3, S = 10, runs = trials_or(o, 200);
  const double delta = 0.1;
  const double radius_target = 0.1;
  const std::size_t T = static_cast<std::size_t>(std::ceil(
      2.0 * A * (std::log(static_cast<double>(S)) + std::log(2.0 / delta)) / (radius_target * radius_target)));
  const double radius =
      std::sqrt(2.0 * A * (std::log(static_cast<double>(S)) + std::log(2.0 / delta)) / static_cast<double>(T));
  std::vector<DeterministicPolicy> constants;
  for (ActionIndex a = 0; a < A; ++a) constants.push_back(DeterministicPolicy{std::vector<ActionIndex>(S, a)});
  const PolicyClass cls(std::move(constants), A);
  const auto sep = VerifiedSeparator::verify(cls, SeparatorSet{{0}});
  const CostAggregate empty(cls);
  const MftplParams params{1.0, T, 1, std::nullopt};
  const auto reference = mc_ftpl_reference(cls, empty, sep, params.eta, params.K, 100 * T,
                                           derive_seed(o.seed, 0xfeed));
  CscOracle oracle(cls);
  std::size_t violations = 0;
  for (std::size_t r = 0; r < runs; ++r) {
    const auto u = mftpl(oracle, empty, sep, params, derive_seed(o.seed, r));
    double l1 = 0.0;
    for (std::size_t h = 0; h < A; ++h) l1 += std::abs(u[h] - reference[h]);
    if (l1 > radius) ++violations;
    tally.result.worst = std::max(tally.result.worst, l1);
  }
  const double rate = static_cast<double>(violations) / static_cast<double>(runs);
  const double slack = 3.0 * std::sqrt(delta * (1 - delta) / static_cast<double>(runs));
  tally.result.trials = runs;
  tally.result.failures = rate <= delta + slack ? 0 : violations;
  std::ostringstream d;
  d << "T=" << T << " radius=" << radius << " violation_rate=" << rate
    << " allowed=" << delta + slack;
  return tally.finish(d.str());
}

SuiteResult suite_reduction(const SuiteOptions& o) {
  Tally tally("reduction");
  Rng rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t m = 1; m <= 3; ++m) {
    for (std::size_t k = 0; k < trials_or(o, 5); ++k) {
      const auto inst = map_f(random_game(m, rng));
      double err = 0.0;
      for (std::size_t r = 0; r < 20; ++r) {
        const MixedWeight u(random_simplex(2 * m, rng));
        const auto dp = theta_exact(inst.mdp, inst.feedback, inst.policies, u);
        const auto cf = theta_closed_form(inst, u);
        for (std::size_t h = 0; h < 2 * m; ++h) err = std::max(err, std::abs(dp[h] - cf[h]));
      }
      bool ok = err <= 1e-12;
      // Imbalanced points: x-half mass outside [1/3, 2/3].
      for (std::size_t r = 0; r < 50; ++r) {
        const double mass = unit(rng) < 0.5 ? unit(rng) / 3.0 * 0.999 : 1.0 - unit(rng) / 3.0 * 0.999;
        auto x = random_simplex(m, rng), y = random_simplex(m, rng);
        std::vector<double> u;
        for (double v : x) u.push_back(mass * v);
        for (double v : y) u.push_back((1 - mass) * v);
        const MixedWeight w(u);
        ok = ok && vi_gap(theta_closed_form(inst, w), w.values()) >= 1.0 / 3.0 - 1e-9;
      }
      tally.record(ok, err);
    }
  }
  return tally.finish("theta = C u / 3 by DP; imbalanced points have VI gap >= 1/3");
}

const std::map<std::string, std::function<SuiteResult(const SuiteOptions&)>>& registry() {
  static const std::map<std::string, std::function<SuiteResult(const SuiteOptions&)>> suites{
      {"occupancy", suite_occupancy},
      {"j_consistency", suite_j_consistency},
      {"pdl", suite_pdl},
      {"bilinearity", suite_bilinearity},
      {"theta_linearity", suite_theta_linearity},
      {"continuity", suite_continuity},
      {"sandwich", suite_sandwich},
      {"oracle", suite_oracle},
      {"mixed_linearity", suite_mixed_linearity},
      {"separator", suite_separator},
      {"unbiasedness", suite_unbiasedness},
      {"hedge_regret", suite_hedge_regret},
      {"concentration", suite_concentration},
      {"reduction", suite_reduction},
  };
  return suites;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

bool suite_exists(const std::string& name) {
  return name == "all" || registry().count(name) > 0;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& options) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown suite \"" + name + "\"");
  return it->second(options);
}

std::string suites_to_json(const std::vector<SuiteResult>& results) {
  nlohmann::json doc;
  bool all = true;
  doc["suites"] = nlohmann::json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    doc["suites"].push_back({{"name", r.name},
                             {"passed", r.passed},
                             {"trials", r.trials},
                             {"failures", r.failures},
                             {"worst", r.worst},
                             {"detail", r.detail}});
  }
  doc["passed"] = all;
  return doc.dump(2) + "\n";
}

}  // namespace coil::harness
