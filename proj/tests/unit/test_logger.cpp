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

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "coil/gadgets.hpp"
#include "coil/logger.hpp"
#include "oracles.hpp"

namespace coil {
namespace {

ImitationInstance cover_instance(std::size_t H, FeedbackKind kind) {
  auto c = make_cover_mdp(H);
  auto fb = make_feedback(c.mdp, c.expert, kind, 1.0);
  auto sep = greedy_separator(c.policies);
  return {std::move(c.mdp), std::move(c.expert), std::move(c.policies), std::move(fb), std::move(sep)};
}

ImitationInstance random_instance(std::uint64_t seed) {
  Rng rng(seed);
  RandomMdpOptions opt;
  opt.layer_sizes = {1, 3, 3};
  opt.num_actions = 2;
  auto mdp = random_mdp(opt, rng);
  auto e = random_deterministic_policy(mdp.num_states(), 2, rng);
  auto cls = random_distinct_class(4, mdp.num_states(), 2, rng);
  auto fb = make_feedback(mdp, e, FeedbackKind::kAdvantage);
  auto sep = greedy_separator(cls);
  return {std::move(mdp), std::move(e), std::move(cls), std::move(fb), std::move(sep)};
}

TEST(Learner, ParseAndPrint) {
  for (auto k : {LearnerKind::kHedge, LearnerKind::kMftpl, LearnerKind::kMftplEg, LearnerKind::kFtlProper,
                 LearnerKind::kCustom}) {
    EXPECT_EQ(parse_learner(to_string(k)), k);
  }
  EXPECT_FALSE(parse_learner("dagger").has_value());
}

TEST(Learner, ConfigValidation) {
  LearnerConfig c;
  c.N = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.N = 3;
  c.kind = LearnerKind::kCustom;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.kind = LearnerKind::kHedge;
  c.K = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Logger, RegretsMatchIndependentRecomputation) {
  const auto inst = random_instance(3);
  for (auto kind : {LearnerKind::kHedge, LearnerKind::kMftpl, LearnerKind::kMftplEg, LearnerKind::kFtlProper}) {
    LearnerConfig cfg;
    cfg.kind = kind;
    cfg.N = 40;
    cfg.K = 3;
    cfg.T = 10;
    cfg.eta = 0.2;
    cfg.seed = 5;
    const auto ledger = run_logger(inst, cfg);
    ASSERT_EQ(ledger.size(), 40u);
    const std::size_t B = inst.policies.size();
    std::vector<double> theta_sum(B, 0.0), g_sum(B, 0.0);
    double f_sum = 0.0, dyn = 0.0, lin = 0.0;
    for (const auto& r : ledger.rounds) {
      // F_n is the exact imitation loss of the round's policy, recomputed here.
      const auto ref_theta = testing::enumerated_theta(inst.mdp, inst.feedback, inst.policies, r.u);
      double f = 0.0, gu = 0.0;
      for (std::size_t h = 0; h < B; ++h) {
        EXPECT_NEAR(r.theta[h], ref_theta[h], 1e-12);
        f += ref_theta[h] * r.u[h];
        gu += r.g[h] * r.u[h];
        theta_sum[h] += ref_theta[h];
        g_sum[h] += r.g[h];
      }
      EXPECT_NEAR(r.F, f, 1e-12);
      EXPECT_NEAR(r.lin_loss, gu, 1e-12);
      f_sum += f;
      lin += gu;
      dyn += f - *std::min_element(ref_theta.begin(), ref_theta.end());
      EXPECT_NEAR(r.sreg, f_sum - *std::min_element(theta_sum.begin(), theta_sum.end()), 1e-9);
      EXPECT_NEAR(r.dreg, dyn, 1e-9);
      EXPECT_NEAR(r.lreg, lin - *std::min_element(g_sum.begin(), g_sum.end()), 1e-9);
      EXPECT_GE(r.dreg, r.sreg - 1e-9);
    }
    EXPECT_DOUBLE_EQ(static_regret(ledger), ledger.back().sreg);
    EXPECT_DOUBLE_EQ(dynamic_regret(ledger), ledger.back().dreg);
    EXPECT_DOUBLE_EQ(linear_regret(ledger), ledger.back().lreg);
  }
}

TEST(Logger, SameSeedSameLedger) {
  const auto inst = random_instance(4);
  LearnerConfig cfg;
  cfg.kind = LearnerKind::kMftplEg;
  cfg.N = 15;
  cfg.K = 2;
  cfg.T = 7;
  cfg.eta = 0.3;
  cfg.seed = 99;
  std::ostringstream a, b;
  write_ledger_csv(a, run_logger(inst, cfg));
  cfg.threads = 2;
  write_ledger_csv(b, run_logger(inst, cfg));
  EXPECT_EQ(a.str(), b.str());
  cfg.seed = 100;
  std::ostringstream c;
  write_ledger_csv(c, run_logger(inst, cfg));
  EXPECT_NE(a.str(), c.str());
}

TEST(Logger, ExtraGradientRecordsProvisionalRound) {
  const auto inst = cover_instance(3, FeedbackKind::kZeroOne);
  LearnerConfig cfg;
  cfg.kind = LearnerKind::kMftplEg;
  cfg.N = 5;
  cfg.K = 4;
  cfg.T = 9;
  cfg.eta = 0.5;
  const auto ledger = run_logger(inst, cfg);
  for (const auto& r : ledger.rounds) {
    EXPECT_TRUE(r.u_hat.has_value());
    EXPECT_TRUE(r.g_hat.has_value());
  }
  EXPECT_EQ(ledger.back().annotations, 40u);
  EXPECT_EQ(ledger.back().oracle_calls, 90u);
}

TEST(Logger, MftplNeedsSeparator) {
  auto inst = cover_instance(3, FeedbackKind::kZeroOne);
  inst.separator.reset();
  LearnerConfig cfg;
  cfg.kind = LearnerKind::kMftpl;
  cfg.N = 2;
  cfg.T = 2;
  cfg.eta = 1.0;
  EXPECT_THROW(run_logger(inst, cfg), std::invalid_argument);
  inst.separator = SeparatorSet{};
  EXPECT_THROW(run_logger(inst, cfg), std::invalid_argument);
}

TEST(Logger, CustomLearnerSeesHistory) {
  const auto inst = cover_instance(3, FeedbackKind::kZeroOne);
  std::vector<std::size_t> seen;
  LearnerConfig cfg;
  cfg.kind = LearnerKind::kCustom;
  cfg.N = 4;
  cfg.custom = [&](std::span<const LinearLoss> history) {
    seen.push_back(history.size());
    return MixedWeight::onehot(2, 1);
  };
  const auto ledger = run_logger(inst, cfg);
  EXPECT_EQ(seen, (std::vector<std::size_t>{0, 1, 2, 3}));
  // Always h_R under zero-one feedback: F_n = 1 each round.
  EXPECT_DOUBLE_EQ(ledger.back().F, 1.0);
}

TEST(Logger, FtlProperOnCoverMeetsLowerBound) {
  for (std::size_t H : {3u, 5u}) {
    const double h = static_cast<double>(H);
    const auto zo = run_logger(cover_instance(H, FeedbackKind::kZeroOne),
                               LearnerConfig{LearnerKind::kFtlProper, 300, 1, 0.1, 1, {}, {}, 1, {}});
    EXPECT_GE(zo.back().sreg / 300.0, (h - 2) / (2 * h));
    const auto ad = run_logger(cover_instance(H, FeedbackKind::kAdvantage),
                               LearnerConfig{LearnerKind::kFtlProper, 300, 1, 0.1, 1, {}, {}, 1, {}});
    EXPECT_GE(ad.back().sreg / 300.0, (h - 1) / (2 * h));
    EXPECT_EQ(ad.back().oracle_calls, 0u);
  }
}

TEST(FtlProper, ArgminWithTies) {
  EXPECT_EQ(ftl_proper_baseline({}), 0u);
  const std::vector<LinearLoss> h{LinearLoss{{1.0, 0.0, 0.5}}, LinearLoss{{0.0, 1.0, 0.5}}};
  EXPECT_EQ(ftl_proper_baseline(h), 0u);
  const std::vector<LinearLoss> g{LinearLoss{{1.0, 0.0, 0.5}}, LinearLoss{{0.0, 1.0, 0.25}}};
  EXPECT_EQ(ftl_proper_baseline(g), 2u);
}

TEST(BehaviorCloning, DisagreementMatchesEnumeration) {
  Rng rng(12);
  for (int k = 0; k < 30; ++k) {
    const auto mdp = testing::small_mdp(rng);
    const auto e = random_deterministic_policy(mdp.num_states(), mdp.num_actions(), rng);
    const auto cls = testing::small_class(3, mdp, rng);
    const auto d = testing::enumerated_occupancy(mdp, StochasticPolicy::from_deterministic(e, mdp.num_actions()));
    const auto dis = expert_disagreement(mdp, e, cls);
    double best = 1.0;
    for (std::size_t h = 0; h < 3; ++h) {
      double ref = 0.0;
      for (StateIndex s = 0; s < mdp.num_states(); ++s) ref += cls[h](s) != e(s) ? d[s] : 0.0;
      EXPECT_NEAR(dis[h], ref, 1e-12);
      best = std::min(best, ref);
    }
    EXPECT_NEAR(bias_expert(mdp, e, cls), best, 1e-12);
  }
}

TEST(BehaviorCloning, RecoversExpertInRealizableClass) {
  Rng rng(13);
  RandomMdpOptions opt;
  opt.layer_sizes = {1, 2, 2};
  opt.num_actions = 2;
  const auto mdp = random_mdp(opt, rng);
  const auto e = random_deterministic_policy(mdp.num_states(), 2, rng);
  std::vector<DeterministicPolicy> hs;
  while (hs.size() < 3) {
    auto h = random_deterministic_policy(mdp.num_states(), 2, rng);
    if (h != e) hs.push_back(h);
  }
  hs.push_back(e);
  const PolicyClass cls(std::move(hs), 2);
  const auto pick = behavior_cloning(mdp, e, cls, 500, 1);
  EXPECT_EQ(expert_disagreement(mdp, e, cls)[pick], 0.0);
}

TEST(BehaviorCloning, MixedBiasGridOnCover) {
  // h_L misses 2a/3 and h_R misses 1 - 2a/3 under u = (a, 1 - a); the
  // pointwise minimum peaks at a = 3/4 with value 1/2.
  const auto cover = make_cover_mdp(3);
  EXPECT_DOUBLE_EQ(bias_mixed_grid(cover.mdp, cover.expert, cover.policies), 0.5);
  // On sevenths the best grid point is a = 5/7.
  EXPECT_NEAR(bias_mixed_grid(cover.mdp, cover.expert, cover.policies, 7), 10.0 / 21.0, 1e-15);
  EXPECT_DOUBLE_EQ(bias_expert(cover.mdp, cover.expert, cover.policies), 1.0 / 3.0);
  const auto inst = random_instance(2);
  EXPECT_THROW(bias_mixed_grid(inst.mdp, inst.expert, inst.policies), std::invalid_argument);
}

TEST(Logger, AverageCostBoundedByStaticRegretWhenRealizable) {
  // With the expert in the class the bias term vanishes and
  // (1/N) sum J(pi_n) - J(pi^E) <= (H/N) SReg holds on every run.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(40 + seed);
    RandomMdpOptions opt;
    opt.layer_sizes = {1, 3, 3, 2};
    opt.num_actions = 2;
    auto mdp = random_mdp(opt, rng);
    auto e = random_deterministic_policy(mdp.num_states(), 2, rng);
    std::vector<DeterministicPolicy> hs{e};
    while (hs.size() < 4) hs.push_back(random_deterministic_policy(mdp.num_states(), 2, rng));
    PolicyClass cls(std::move(hs), 2);
    auto fb = make_feedback(mdp, e, seed % 2 ? FeedbackKind::kZeroOne : FeedbackKind::kAdvantage);
    const ImitationInstance inst{mdp, e, cls, fb, std::nullopt};
    LearnerConfig cfg;
    cfg.N = 60;
    cfg.K = 2;
    cfg.seed = seed;
    const auto ledger = run_logger(inst, cfg);
    const double j_e = testing::enumerated_cost(mdp, StochasticPolicy::from_deterministic(e, 2));
    double avg = 0.0;
    for (const auto& r : ledger.rounds) avg += testing::enumerated_cost(mdp, mixed_policy(cls, r.u)) - j_e;
    avg /= 60.0;
    EXPECT_LE(avg, static_cast<double>(mdp.horizon()) / 60.0 * ledger.back().sreg + 1e-9);
  }
}

TEST(Csv, HeaderAndRows) {
  const auto inst = cover_instance(3, FeedbackKind::kZeroOne);
  LearnerConfig cfg;
  cfg.N = 6;
  std::ostringstream out;
  write_ledger_csv(out, run_logger(inst, cfg));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kLedgerCsvHeader);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
    EXPECT_EQ(line.substr(0, line.find(',')), std::to_string(rows));
  }
  EXPECT_EQ(rows, 6);
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double v : {0.0, 1.0 / 3.0, -2.5e-17, 123456789.125, 0.1}) {
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

}  // namespace
}  // namespace coil
