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

#include <benchmark/benchmark.h>

#include "coil/gadgets.hpp"
#include "coil/logger.hpp"
#include "coil/olo.hpp"
#include "coil/random_instances.hpp"

namespace {

using namespace coil;

LayeredMdp wide_mdp(std::size_t width, std::size_t H) {
  Rng rng(1);
  RandomMdpOptions opt;
  opt.layer_sizes.assign(H, width);
  opt.num_actions = 4;
  return random_mdp(opt, rng);
}

void BM_Occupancy(benchmark::State& state) {
  const auto mdp = wide_mdp(static_cast<std::size_t>(state.range(0)), 10);
  Rng rng(2);
  const auto pi = random_stochastic_policy(mdp.num_states(), mdp.num_actions(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(occupancy(mdp, pi));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Occupancy)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_Evaluate(benchmark::State& state) {
  const auto mdp = wide_mdp(static_cast<std::size_t>(state.range(0)), 10);
  Rng rng(3);
  const auto pi = random_stochastic_policy(mdp.num_states(), mdp.num_actions(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(mdp, pi));
}
BENCHMARK(BM_Evaluate)->Arg(32)->Arg(128);

void BM_OracleCall(benchmark::State& state) {
  Rng rng(4);
  const std::size_t B = static_cast<std::size_t>(state.range(0));
  const auto cls = random_distinct_class(B, 40, 4, rng);
  CostAggregate history(cls);
  history.add(CscExample{0, {0.1, 0.2, 0.3, 0.4}});
  const std::vector<CscExample> extra(4, CscExample{5, {1.0, 0.0, 0.5, 0.25}});
  const CscOracle oracle(cls);
  for (auto _ : state) benchmark::DoNotOptimize(oracle(history, extra));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OracleCall)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

void BM_MftplRound(benchmark::State& state) {
  Rng rng(5);
  const auto cls = random_distinct_class(16, 40, 4, rng);
  const auto sep = VerifiedSeparator::verify(cls, greedy_separator(cls));
  const CostAggregate history(cls);
  const CscOracle oracle(cls);
  const MftplParams params{0.1, static_cast<std::size_t>(state.range(0)), 1, std::nullopt};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mftpl(oracle, history, sep, params, ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MftplRound)->Arg(100)->Arg(1000);

void BM_LoggerHedgeCover(benchmark::State& state) {
  const auto cover = make_cover_mdp(3);
  const ImitationInstance inst{cover.mdp, cover.expert, cover.policies,
                               make_feedback(cover.mdp, cover.expert, FeedbackKind::kZeroOne, 1.0),
                               std::nullopt};
  LearnerConfig cfg;
  cfg.N = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_logger(inst, cfg));
}
BENCHMARK(BM_LoggerHedgeCover)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
