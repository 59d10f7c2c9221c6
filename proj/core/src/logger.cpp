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

#include "coil/logger.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace coil {

std::string to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kHedge: return "hedge";
    case LearnerKind::kMftpl: return "mftpl";
    case LearnerKind::kMftplEg: return "mftpl_eg";
    case LearnerKind::kFtlProper: return "ftl_proper";
    case LearnerKind::kCustom: return "custom";
  }
  return "unknown";
}

std::optional<LearnerKind> parse_learner(const std::string& name) {
  if (name == "hedge") return LearnerKind::kHedge;
  if (name == "mftpl") return LearnerKind::kMftpl;
  if (name == "mftpl_eg") return LearnerKind::kMftplEg;
  if (name == "ftl_proper") return LearnerKind::kFtlProper;
  if (name == "custom") return LearnerKind::kCustom;
  return std::nullopt;
}

void LearnerConfig::validate() const {
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  if (eta && !(*eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (T && *T < 1) throw std::invalid_argument("T must be at least 1");
  if (kind == LearnerKind::kCustom && !custom) {
    throw std::invalid_argument("custom learner selected without a callback");
  }
}

namespace {

// Neumaier compensated sum; the regret columns are long running totals.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class VectorAccumulator {
 public:
  explicit VectorAccumulator(std::size_t size) : parts_(size) {}
  void add(const LinearLoss& g) {
    for (std::size_t h = 0; h < parts_.size(); ++h) parts_[h].add(g[h]);
  }
  double min() const {
    double best = parts_.front().value();
    for (const auto& p : parts_) best = std::min(best, p.value());
    return best;
  }
  LinearLoss values() const {
    LinearLoss out{std::vector<double>(parts_.size())};
    for (std::size_t h = 0; h < parts_.size(); ++h) out.values[h] = parts_[h].value();
    return out;
  }

 private:
  std::vector<Accumulator> parts_;
};

double min_entry(const LinearLoss& g) {
  return *std::min_element(g.values.begin(), g.values.end());
}

MixedWeight onehot_of_ftl(std::span<const LinearLoss> history, std::size_t size) {
  if (history.empty()) return MixedWeight::onehot(size, 0);
  return MixedWeight::onehot(size, ftl_proper_baseline(history));
}

}  // namespace

RegretLedger run_logger(const ImitationInstance& instance, const LearnerConfig& config) {
  config.validate();
  const LayeredMdp& mdp = instance.mdp;
  const PolicyClass& cls = instance.policies;
  const ExpertFeedback& feedback = instance.feedback;
  cls.check_compatible(mdp);
  const std::size_t B = cls.size();

  RegretLedger ledger;
  ledger.learner = config.kind;
  ledger.params.K = config.K;

  const bool perturbed =
      config.kind == LearnerKind::kMftpl || config.kind == LearnerKind::kMftplEg;
  std::optional<VerifiedSeparator> separator;
  if (perturbed) {
    if (!instance.separator) throw std::invalid_argument("MFTPL learners need a separator set");
    separator = VerifiedSeparator::verify(cls, *instance.separator);
    const double mu = feedback.mu() > 0.0 ? feedback.mu() : 1.0;
    if (!config.eta || !config.T) {
      if (B < 2) {
        throw std::invalid_argument(
            "the default schedules need B >= 2; pass eta and T explicitly for a single policy");
      }
      const MftplParams schedule =
          config.kind == LearnerKind::kMftpl
              ? mftpl_default_params(config.N, mdp.num_states(), mdp.num_actions(), B,
                                     separator->size(), mu, config.delta)
              : mftpl_eg_default_params(config.N, mdp.num_states(), mdp.num_actions(), B,
                                        separator->size(), mu, mdp.horizon(), config.delta);
      ledger.params.eta = config.eta.value_or(schedule.eta);
      ledger.params.T = config.T.value_or(schedule.T);
      ledger.params.warning = schedule.warning;
    } else {
      ledger.params.eta = *config.eta;
      ledger.params.T = *config.T;
    }
  } else if (config.kind == LearnerKind::kHedge) {
    ledger.params.eta = config.eta.value_or(
        B >= 2 ? std::sqrt(std::log(static_cast<double>(B)) / (2.0 * static_cast<double>(config.N)))
               : 1.0);
    ledger.params.T = 1;
  }
  ledger.params.validate();

  CscOracle oracle(cls);
  CostAggregate history(cls);
  std::vector<LinearLoss> losses;
  losses.reserve(config.N);
  VectorAccumulator g_sum(B);
  VectorAccumulator theta_sum(B);
  Accumulator f_sum;
  Accumulator lin_sum;
  Accumulator dreg;
  std::size_t annotations = 0;
  ledger.rounds.reserve(config.N);

  for (std::size_t n = 1; n <= config.N; ++n) {
    const std::uint64_t learner_seed = derive_seed(config.seed, 2 * n);
    const std::uint64_t sample_seed = derive_seed(config.seed, 2 * n + 1);
    RoundRecord rec;
    rec.n = n;

    switch (config.kind) {
      case LearnerKind::kHedge:
        rec.u = hedge_step(g_sum.values(), ledger.params.eta);
        break;
      case LearnerKind::kFtlProper:
        rec.u = onehot_of_ftl(losses, B);
        break;
      case LearnerKind::kCustom:
        rec.u = config.custom(losses);
        if (rec.u.size() != B) throw std::invalid_argument("custom learner returned a bad weight");
        break;
      case LearnerKind::kMftpl:
        rec.u = mftpl(oracle, history, *separator, ledger.params, learner_seed, config.threads);
        break;
      case LearnerKind::kMftplEg: {
        auto eg = mftpl_eg_round(oracle, history, mdp, feedback, *separator, ledger.params,
                                 learner_seed, config.threads);
        annotations += eg.extra.size();
        rec.g_hat = linear_loss_of(eg.extra, cls);
        rec.u_hat = std::move(eg.provisional);
        rec.u = std::move(eg.final_weight);
        break;
      }
    }

    const StochasticPolicy pi = mixed_policy(cls, rec.u);
    const OccupancyProfile occ = occupancy(mdp, pi);
    rec.theta = theta_from_occupancy(feedback, cls, occ);
    rec.F = round_loss_exact(mdp, feedback, pi, pi);

    Dataset data = sample_dataset(mdp, feedback, pi, config.K, sample_seed);
    annotations += data.size();
    rec.g = linear_loss_of(data, cls);
    rec.lin_loss = rec.g.dot(rec.u);
    history.add(data);
    losses.push_back(rec.g);

    f_sum.add(rec.F);
    lin_sum.add(rec.lin_loss);
    dreg.add(rec.F - min_entry(rec.theta));
    theta_sum.add(rec.theta);
    g_sum.add(rec.g);

    rec.sreg = f_sum.value() - theta_sum.min();
    rec.dreg = dreg.value();
    rec.lreg = lin_sum.value() - g_sum.min();
    rec.annotations = annotations;
    rec.oracle_calls = oracle.calls();
    ledger.rounds.push_back(std::move(rec));
  }
  return ledger;
}

double static_regret(const RegretLedger& ledger) {
  if (ledger.rounds.empty()) return 0.0;
  VectorAccumulator theta_sum(ledger.rounds.front().theta.size());
  Accumulator f_sum;
  for (const auto& r : ledger.rounds) {
    f_sum.add(r.F);
    theta_sum.add(r.theta);
  }
  return f_sum.value() - theta_sum.min();
}

double dynamic_regret(const RegretLedger& ledger) {
  Accumulator total;
  for (const auto& r : ledger.rounds) total.add(r.F - min_entry(r.theta));
  return total.value();
}

double linear_regret(const RegretLedger& ledger) {
  if (ledger.rounds.empty()) return 0.0;
  VectorAccumulator g_sum(ledger.rounds.front().g.size());
  Accumulator lin;
  for (const auto& r : ledger.rounds) {
    lin.add(r.g.dot(r.u));
    g_sum.add(r.g);
  }
  return lin.value() - g_sum.min();
}

std::size_t ftl_proper_baseline(std::span<const LinearLoss> history) {
  if (history.empty()) return 0;
  VectorAccumulator sum(history.front().size());
  for (const auto& g : history) sum.add(g);
  const LinearLoss totals = sum.values();
  std::size_t best = 0;
  for (std::size_t h = 1; h < totals.size(); ++h) {
    if (totals[h] < totals[best]) best = h;
  }
  return best;
}

namespace {

ExpertFeedback disagreement_feedback(const DeterministicPolicy& expert, std::size_t num_actions) {
  std::vector<double> table(expert.size() * num_actions, 1.0);
  for (StateIndex s = 0; s < expert.size(); ++s) table[s * num_actions + expert(s)] = 0.0;
  return ExpertFeedback(FeedbackKind::kZeroOne, 1.0, expert, std::move(table), num_actions);
}

}  // namespace

std::size_t behavior_cloning(const LayeredMdp& mdp, const DeterministicPolicy& expert,
                             const PolicyClass& policies, std::size_t K, std::uint64_t seed) {
  policies.check_compatible(mdp);
  const auto labels = disagreement_feedback(expert, mdp.num_actions());
  const auto pi_e = StochasticPolicy::from_deterministic(expert, mdp.num_actions());
  const Dataset data = sample_dataset(mdp, labels, pi_e, K, seed);
  CscOracle oracle(policies);
  return oracle(data.examples);
}

std::vector<double> expert_disagreement(const LayeredMdp& mdp, const DeterministicPolicy& expert,
                                        const PolicyClass& policies) {
  policies.check_compatible(mdp);
  const auto labels = disagreement_feedback(expert, mdp.num_actions());
  const auto occ = occupancy(mdp, StochasticPolicy::from_deterministic(expert, mdp.num_actions()));
  return theta_from_occupancy(labels, policies, occ).values;
}

double bias_expert(const LayeredMdp& mdp, const DeterministicPolicy& expert,
                   const PolicyClass& policies) {
  const auto d = expert_disagreement(mdp, expert, policies);
  return *std::min_element(d.begin(), d.end());
}

double bias_mixed_grid(const LayeredMdp& mdp, const DeterministicPolicy& expert,
                       const PolicyClass& policies, std::size_t resolution) {
  if (policies.size() != 2) throw std::invalid_argument("bias grid needs a two-policy class");
  if (resolution == 0) throw std::invalid_argument("bias grid resolution must be positive");
  double worst = 0.0;
  for (std::size_t k = 0; k <= resolution; ++k) {
    const double a = static_cast<double>(k) / static_cast<double>(resolution);
    const MixedWeight u({a, 1.0 - a});
    const auto occ = occupancy(mdp, mixed_policy(policies, u));
    double best = 1.0;
    for (std::size_t h = 0; h < 2; ++h) {
      double miss = 0.0;
      for (StateIndex s = 0; s < mdp.num_states(); ++s) {
        if (policies[h](s) != expert(s)) miss += occ.averaged[s];
      }
      best = std::min(best, miss);
    }
    worst = std::max(worst, best);
  }
  return worst;
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

void write_ledger_csv(std::ostream& out, const RegretLedger& ledger) {
  out << kLedgerCsvHeader << '\n';
  for (const auto& r : ledger.rounds) {
    out << r.n << ',' << format_double(r.F) << ',' << format_double(r.lin_loss) << ','
        << format_double(r.sreg) << ',' << format_double(r.dreg) << ',' << format_double(r.lreg)
        << ',' << r.annotations << ',' << r.oracle_calls << '\n';
  }
}

}  // namespace coil
