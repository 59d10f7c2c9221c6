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
#include <cmath>
#include <optional>

#include "coil/gadgets.hpp"
#include "oracles.hpp"

namespace coil {
namespace {

TEST(Cover, RejectsShortHorizonAndNotesH2) {
  EXPECT_THROW(make_cover_mdp(1), std::invalid_argument);
  EXPECT_TRUE(make_cover_mdp(2).note.has_value());
  EXPECT_FALSE(make_cover_mdp(3).note.has_value());
  const auto c = make_cover_mdp(4);
  EXPECT_EQ(c.mdp.num_states(), 7u);
  EXPECT_EQ(c.mdp.state_name(3), "S_L@3");
  EXPECT_EQ(c.policies.size(), 2u);
}

TEST(Discrepancy, CoverClosedForm) {
  EXPECT_EQ(alt_mixture_discrepancy(3), std::make_pair(2.0, 1.0));
  for (std::size_t H : {2u, 4u, 7u}) {
    const double h = static_cast<double>(H);
    const auto [lhs, rhs] = alt_mixture_discrepancy(H);
    EXPECT_DOUBLE_EQ(lhs, h - 1);
    EXPECT_DOUBLE_EQ(rhs, (h - 1) / 2);
  }
  // Pure mixtures coincide with the performance difference.
  const std::vector<double> pure{1.0, 0.0};
  const auto [l, r] = alt_mixture_discrepancy(5, pure);
  EXPECT_DOUBLE_EQ(l, r);
}

TEST(Game, Validation) {
  EXPECT_NO_THROW((BimatrixGame{1, {0.0}, {1.0}}.validate()));
  EXPECT_THROW((BimatrixGame{1, {1.5}, {0.0}}.validate()), std::invalid_argument);
  EXPECT_THROW((BimatrixGame{2, {0.0}, {0.0}}.validate()), std::invalid_argument);
  EXPECT_THROW((BimatrixGame{0, {}, {}}.validate()), std::invalid_argument);
  EXPECT_THROW(map_f(BimatrixGame{1, {-0.1}, {0.0}}), std::invalid_argument);
}

TEST(Reduction, SingleActionGame) {
  const auto inst = map_f(BimatrixGame{1, {1.0}, {1.0}});
  EXPECT_EQ(inst.mdp.num_states(), 13u);
  EXPECT_EQ(inst.mdp.horizon(), 3u);
  EXPECT_EQ(inst.num_policies(), 2u);
  const auto u = MixedWeight::uniform(2);
  const auto theta = theta_exact(inst.mdp, inst.feedback, inst.policies, u);
  EXPECT_NEAR(theta[0], 53.0 / 6.0, 1e-12);
  EXPECT_NEAR(theta[1], 53.0 / 6.0, 1e-12);
  const auto cf = theta_closed_form(inst, u);
  EXPECT_NEAR(cf[0], 53.0 / 6.0, 1e-12);
}

TEST(Reduction, ExpertPlaysLastActionAndFeedbackIsAdvantage) {
  Rng rng(1);
  const auto game = random_game(2, rng);
  const auto inst = map_f(game);
  const std::size_t A = inst.mdp.num_actions();
  EXPECT_EQ(A, 5u);
  for (StateIndex s = 0; s < inst.mdp.num_states(); ++s) EXPECT_EQ(inst.expert(s), A - 1);
  EXPECT_EQ(inst.feedback.kind(), FeedbackKind::kAdvantage);
  const auto adv = advantage_of_expert(inst.mdp, inst.expert);
  for (std::size_t i = 0; i < adv.size(); ++i) EXPECT_EQ(inst.feedback.table()[i], adv[i]);
}

TEST(Reduction, ThetaMatchesGameFormula) {
  Rng rng(2);
  for (std::size_t m = 1; m <= 3; ++m) {
    for (int k = 0; k < 10; ++k) {
      const auto game = random_game(m, rng);
      const auto inst = map_f(game);
      const MixedWeight u(random_simplex(2 * m, rng));
      const auto theta = testing::enumerated_theta(inst.mdp, inst.feedback, inst.policies, u);
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        mx += u[i];
        my += u[m + i];
      }
      for (std::size_t j = 0; j < m; ++j) {
        double vy = 0.0, wx = 0.0;
        for (std::size_t k2 = 0; k2 < m; ++k2) {
          vy += game.v(j, k2) * u[m + k2];
          wx += game.w(k2, j) * u[k2];
        }
        EXPECT_NEAR(theta[j], (kReductionLambda * mx - vy) / 3, 1e-12);
        EXPECT_NEAR(theta[m + j], (kReductionLambda * my - wx) / 3, 1e-12);
      }
    }
  }
}

TEST(MapG, NormalizesHalves) {
  const std::vector<double> u{0.1, 0.3, 0.2, 0.4};
  const auto xy = map_g(u);
  EXPECT_DOUBLE_EQ(xy.x[0], 0.25);
  EXPECT_DOUBLE_EQ(xy.x[1], 0.75);
  EXPECT_NEAR(xy.y[0], 1.0 / 3.0, 1e-15);
  const std::vector<double> dead{0.0, 0.0, 0.5, 0.5};
  EXPECT_THROW(map_g(dead), std::invalid_argument);
  const std::vector<double> odd{0.5, 0.2, 0.3};
  EXPECT_THROW(map_g(odd), std::invalid_argument);
}

TEST(Balance, FlagsProductBelowTwoNinths) {
  const std::vector<double> balanced{0.2, 0.2, 0.3, 0.3};
  const auto b = balance_check(balanced);
  EXPECT_DOUBLE_EQ(b.mass_x, 0.4);
  EXPECT_NEAR(b.product, 0.24, 1e-15);
  EXPECT_FALSE(b.flagged);
  const std::vector<double> edge{1.0 / 3.0, 2.0 / 3.0};
  EXPECT_FALSE(balance_check(edge).flagged);
  const std::vector<double> lopsided{0.1, 0.9};
  EXPECT_TRUE(balance_check(lopsided).flagged);
}

TEST(VIGap, Examples) {
  const std::vector<double> theta{1.0, 2.0, 4.0}, u{0.5, 0.5, 0.0}, v{1.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(vi_gap(theta, u), 0.5);
  EXPECT_DOUBLE_EQ(vi_gap(theta, v), 0.0);
}

TEST(NashGap, MatchesGridSearch) {
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto game = random_game(2, rng);
    const auto xs = random_simplex(2, rng), ys = random_simplex(2, rng);
    double value_x = 0.0, value_y = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        value_x += xs[i] * game.v(i, j) * ys[j];
        value_y += xs[i] * game.w(i, j) * ys[j];
      }
    }
    double best = -1e300;
    for (int step = 0; step <= 200; ++step) {
      const double p = step / 200.0;
      double rx = 0.0, cy = 0.0;
      for (std::size_t j = 0; j < 2; ++j) {
        rx += (p * game.v(0, j) + (1 - p) * game.v(1, j)) * ys[j];
        cy += (p * game.w(j, 0) + (1 - p) * game.w(j, 1)) * xs[j];
      }
      best = std::max({best, rx - value_x, cy - value_y});
    }
    EXPECT_NEAR(nash_gap(game, xs, ys), best, 1e-12);
  }
}

// Solves M z = b by Gaussian elimination with partial pivoting.
std::optional<std::vector<double>> solve(std::vector<std::vector<double>> M, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(M[r][c]) > std::abs(M[p][c])) p = r;
    }
    if (std::abs(M[p][c]) < 1e-12) return std::nullopt;
    std::swap(M[p], M[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = M[r][c] / M[c][c];
      for (std::size_t k = c; k < n; ++k) M[r][k] -= f * M[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= M[i][i];
  return b;
}

// Mixed strategy on `support` that makes the opponent indifferent over
// `their`, where payoff(i, j) is the opponent's payoff for our i and their j.
template <class Payoff>
std::optional<std::vector<double>> indifference(std::size_t m, const std::vector<std::size_t>& support,
                                                const std::vector<std::size_t>& their, Payoff payoff) {
  const std::size_t k = support.size();
  std::vector<std::vector<double>> M(k + 1, std::vector<double>(k + 1, 0.0));
  std::vector<double> b(k + 1, 0.0);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) M[r][c] = payoff(support[c], their[r]);
    M[r][k] = -1.0;
  }
  for (std::size_t c = 0; c < k; ++c) M[k][c] = 1.0;
  b[k] = 1.0;
  const auto z = solve(M, b);
  if (!z) return std::nullopt;
  std::vector<double> full(m, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    if ((*z)[c] < -1e-12) return std::nullopt;
    full[support[c]] = std::max(0.0, (*z)[c]);
  }
  return full;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t m, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1) s.push_back(i);
    }
    if (s.size() == k) out.push_back(s);
  }
  return out;
}

// All equal-support Nash equilibria, by support enumeration.
std::vector<StrategyPair> support_enumeration(const BimatrixGame& g) {
  std::vector<StrategyPair> out;
  for (std::size_t k = 1; k <= g.m; ++k) {
    for (const auto& I : subsets(g.m, k)) {
      for (const auto& J : subsets(g.m, k)) {
        auto x = indifference(g.m, I, J, [&](std::size_t i, std::size_t j) { return g.w(i, j); });
        auto y = indifference(g.m, J, I, [&](std::size_t j, std::size_t i) { return g.v(i, j); });
        if (!x || !y) continue;
        if (nash_gap(g, *x, *y) <= 1e-10) out.push_back({*x, *y});
      }
    }
  }
  return out;
}

TEST(Balance, ExactVISolutionsFromEquilibriaAreBalanced) {
  Rng rng(4);
  const double lambda = kReductionLambda;
  std::size_t checked = 0;
  for (std::size_t m = 1; m <= 3; ++m) {
    for (int k = 0; k < 15; ++k) {
      const auto game = random_game(m, rng);
      const auto inst = map_f(game);
      const double S = static_cast<double>(inst.mdp.num_states());
      const double A = static_cast<double>(inst.mdp.num_actions());
      const double eps = std::pow(S + A + static_cast<double>(2 * m), -6.0);
      for (const auto& ne : support_enumeration(game)) {
        double vstar = 0.0, wstar = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < m; ++j) {
            vstar += ne.x[i] * game.v(i, j) * ne.y[j];
            wstar += ne.x[i] * game.w(i, j) * ne.y[j];
          }
        }
        const double alpha = (lambda + vstar) / (2 * lambda + vstar + wstar);
        std::vector<double> u;
        for (double v : ne.x) u.push_back(alpha * v);
        for (double v : ne.y) u.push_back((1 - alpha) * v);
        const auto theta = theta_exact(inst.mdp, inst.feedback, inst.policies, MixedWeight(u));
        const double gap = vi_gap(theta.values, u);
        EXPECT_LE(gap, eps);
        EXPECT_FALSE(balance_check(u).flagged);
        const auto back = map_g(u);
        EXPECT_LE(nash_gap(game, back.x, back.y), 1e-9);
        ++checked;
      }
    }
  }
  EXPECT_GE(checked, 45u);
}

}  // namespace
}  // namespace coil
