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

#include <cmath>

#include "coil/gadgets.hpp"
#include "coil/imitation.hpp"
#include "oracles.hpp"

namespace coil {
namespace {

TEST(Feedback, ZeroOneTable) {
  Rng rng(2);
  const auto mdp = testing::small_mdp(rng);
  const auto e = random_deterministic_policy(mdp.num_states(), mdp.num_actions(), rng);
  const double mu = recoverability(mdp, e) + 0.5;
  const auto fb = make_feedback(mdp, e, FeedbackKind::kZeroOne, mu);
  EXPECT_EQ(fb.mu(), mu);
  for (StateIndex s = 0; s < mdp.num_states(); ++s) {
    for (ActionIndex a = 0; a < mdp.num_actions(); ++a) EXPECT_EQ(fb(s, a), a == e(s) ? 0.0 : mu);
  }
}

TEST(Feedback, AdvantageTableAndDefaultMu) {
  Rng rng(4);
  const auto mdp = testing::small_mdp(rng);
  const auto e = random_deterministic_policy(mdp.num_states(), mdp.num_actions(), rng);
  const auto fb = make_feedback(mdp, e, FeedbackKind::kAdvantage);
  EXPECT_EQ(fb.mu(), recoverability(mdp, e));
  const auto adv = advantage_of_expert(mdp, e);
  for (std::size_t i = 0; i < adv.size(); ++i) EXPECT_EQ(fb.table()[i], adv[i]);
}

TEST(Feedback, SandwichRejectsSmallZeroOneMu) {
  // Cover: A^E(S_L, L) = 1, so mu = 1/2 breaks A^E <= mu * 1{a != E}.
  const auto cover = make_cover_mdp(3);
  EXPECT_THROW(make_feedback(cover.mdp, cover.expert, FeedbackKind::kZeroOne, 0.5),
               std::invalid_argument);
  EXPECT_NO_THROW(make_feedback(cover.mdp, cover.expert, FeedbackKind::kZeroOne, 1.0));
}

TEST(Feedback, FindSandwichViolation) {
  const DeterministicPolicy e{{0}};
  const std::vector<double> adv{0.0, 0.8};
  EXPECT_FALSE(find_sandwich_violation(adv, std::vector<double>{0.0, 1.0}, e, 1.0, 2));
  const auto v = find_sandwich_violation(adv, std::vector<double>{0.0, 0.5}, e, 1.0, 2);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->second, 1u);
  EXPECT_TRUE(find_sandwich_violation(adv, std::vector<double>{0.1, 0.9}, e, 1.0, 2));
}

TEST(Feedback, CoverRoundLossTables) {
  const std::size_t H = 4;
  const double h = static_cast<double>(H);
  const auto cover = make_cover_mdp(H);
  const auto zo = make_feedback(cover.mdp, cover.expert, FeedbackKind::kZeroOne, 1.0);
  const auto ad = make_feedback(cover.mdp, cover.expert, FeedbackKind::kAdvantage);
  const auto L = MixedWeight::onehot(2, 0), R = MixedWeight::onehot(2, 1);
  const auto tl = theta_exact(cover.mdp, zo, cover.policies, L);
  const auto tr = theta_exact(cover.mdp, zo, cover.policies, R);
  EXPECT_DOUBLE_EQ(tl[0], (h - 1) / h);
  EXPECT_DOUBLE_EQ(tl[1], 1 / h);
  EXPECT_DOUBLE_EQ(tr[0], 0.0);
  EXPECT_DOUBLE_EQ(tr[1], 1.0);
  const auto al = theta_exact(cover.mdp, ad, cover.policies, L);
  const auto ar = theta_exact(cover.mdp, ad, cover.policies, R);
  EXPECT_DOUBLE_EQ(al[0], (h - 1) / h);
  EXPECT_DOUBLE_EQ(al[1], 0.0);
  EXPECT_DOUBLE_EQ(ar[0], 0.0);
  EXPECT_DOUBLE_EQ(ar[1], (h - 1) / h);
}

TEST(Losses, ThetaMatchesEnumeration) {
  Rng rng(6);
  for (int k = 0; k < 200; ++k) {
    const auto mdp = testing::small_mdp(rng);
    const auto e = random_deterministic_policy(mdp.num_states(), mdp.num_actions(), rng);
    const auto fb = make_feedback(mdp, e, k % 2 ? FeedbackKind::kZeroOne : FeedbackKind::kAdvantage);
    const auto cls = testing::small_class(4, mdp, rng);
    const MixedWeight u(random_simplex(4, rng));
    const auto theta = theta_exact(mdp, fb, cls, u);
    const auto ref = testing::enumerated_theta(mdp, fb, cls, u);
    for (std::size_t h = 0; h < 4; ++h) EXPECT_NEAR(theta[h], ref[h], 1e-12);
    // L(pi_u) = <theta(u), u>.
    EXPECT_NEAR(imitation_loss_exact(mdp, fb, mixed_policy(cls, u)), theta.dot(u), 1e-12);
    for (std::size_t h = 0; h < 4; ++h) {
      const auto eval = StochasticPolicy::from_deterministic(cls[h], mdp.num_actions());
      EXPECT_NEAR(round_loss_exact(mdp, fb, mixed_policy(cls, u), eval), ref[h], 1e-12);
    }
  }
}

TEST(Losses, ThetaFromOccupancyAgrees) {
  Rng rng(7);
  const auto mdp = testing::small_mdp(rng);
  const auto e = random_deterministic_policy(mdp.num_states(), mdp.num_actions(), rng);
  const auto fb = make_feedback(mdp, e, FeedbackKind::kAdvantage);
  const auto cls = testing::small_class(3, mdp, rng);
  const auto u = MixedWeight::uniform(3);
  const auto a = theta_exact(mdp, fb, cls, u);
  const auto b = theta_from_occupancy(fb, cls, occupancy(mdp, mixed_policy(cls, u)));
  EXPECT_EQ(a.values, b.values);
}

TEST(Dataset, SampledLossIsUnbiased) {
  Rng rng(10);
  const auto mdp = testing::small_mdp(rng);
  const auto e = random_deterministic_policy(mdp.num_states(), mdp.num_actions(), rng);
  const auto fb = make_feedback(mdp, e, FeedbackKind::kZeroOne);
  const auto cls = testing::small_class(3, mdp, rng);
  const MixedWeight u(random_simplex(3, rng));
  const auto roll = mixed_policy(cls, u);
  const auto theta = theta_exact(mdp, fb, cls, u);
  const std::size_t K = 20000;
  const auto data = sample_dataset(mdp, fb, roll, K, std::uint64_t{5});
  ASSERT_EQ(data.size(), K);
  const auto g = linear_loss_of(data, cls);
  // |zeta| <= mu, so each entry has sd at most mu / sqrt(K).
  for (std::size_t h = 0; h < 3; ++h) EXPECT_NEAR(g[h], theta[h], 5 * fb.mu() / std::sqrt(double(K)));
}

TEST(Dataset, SeedDeterminesSampleAndCostsAreFeedbackRows) {
  Rng rng(11);
  const auto mdp = testing::small_mdp(rng);
  const auto e = random_deterministic_policy(mdp.num_states(), mdp.num_actions(), rng);
  const auto fb = make_feedback(mdp, e, FeedbackKind::kAdvantage);
  const auto pi = StochasticPolicy::uniform(mdp.num_states(), mdp.num_actions());
  const auto a = sample_dataset(mdp, fb, pi, 30, std::uint64_t{9});
  const auto b = sample_dataset(mdp, fb, pi, 30, std::uint64_t{9});
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.examples[i].state, b.examples[i].state);
    const auto row = fb.row(a.examples[i].state);
    EXPECT_EQ(a.examples[i].cost, std::vector<double>(row.begin(), row.end()));
  }
  EXPECT_THROW(sample_dataset(mdp, fb, pi, 0, std::uint64_t{9}), std::invalid_argument);
  EXPECT_THROW(linear_loss_of(Dataset{}, testing::small_class(2, mdp, rng)), std::invalid_argument);
}

}  // namespace
}  // namespace coil
