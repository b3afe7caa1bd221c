// Copyright 2026 The Proplab Authors.
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

#include "proplab/bayesian.h"

#include <cmath>
#include <stdexcept>

namespace proplab {
namespace {

constexpr std::uint64_t kMaxOutcomes = 10'000'000;

using OutcomeFn = std::function<void(const std::vector<int>& types,
                                     const BidProfile& bids, double prob)>;

// Every (type profile, bid profile) pair with its probability.
void ForEachOutcome(const BayesianGame& game, const StrategyMap& strategy,
                    const OutcomeFn& fn) {
  const int n = game.num_agents();
  const int m = game.mechanism().num_columns();
  std::uint64_t count = 0;
  game.ForEachTypeProfile([&](const std::vector<int>& types, double p_types) {
    std::vector<const std::vector<WeightedBid>*> supports(n);
    std::uint64_t size = 1;
    for (int i = 0; i < n; ++i) {
      const BidDistribution& d = strategy[i][types[i]];
      if (!d.is_finite()) {
        throw std::invalid_argument("exact enumeration needs finite supports");
      }
      supports[i] = &d.support();
      size *= supports[i]->size();
    }
    count += size;
    if (count > kMaxOutcomes) {
      throw std::length_error("too many outcomes; use Monte Carlo");
    }
    std::vector<std::size_t> index(n, 0);
    Matrix bids(n, m);
    while (true) {
      double p = p_types;
      for (int i = 0; i < n; ++i) {
        const WeightedBid& w = (*supports[i])[index[i]];
        std::copy(w.bid.begin(), w.bid.end(), bids.row(i).begin());
        p *= w.probability;
      }
      fn(types, BidProfile(bids), p);
      int i = n - 1;
      while (i >= 0 && ++index[i] == supports[i]->size()) {
        index[i] = 0;
        --i;
      }
      if (i < 0) break;
    }
  });
}

double WelfareAt(const BayesianGame& game, const std::vector<int>& types,
                 const BidProfile& bids) {
  const Allocation alloc = game.mechanism().Allocate(bids);
  double total = 0.0;
  for (int i = 0; i < game.num_agents(); ++i) {
    total += game.type(i, types[i]).valuation.EvalUnchecked(alloc.row(i));
  }
  return total;
}

}  // namespace

BayesianGame::BayesianGame(Mechanism mechanism, TypeSpace types)
    : mechanism_(std::move(mechanism)), types_(std::move(types)) {
  if (static_cast<int>(types_.size()) != mechanism_.num_agents()) {
    throw std::invalid_argument("BayesianGame: one type list per agent");
  }
  for (const auto& list : types_) {
    if (list.empty()) throw std::invalid_argument("BayesianGame: no types");
    double total = 0.0;
    for (const auto& t : list) {
      if (!(t.probability >= 0.0)) {
        throw std::invalid_argument("BayesianGame: negative probability");
      }
      if (t.valuation.dim() != mechanism_.allocation_dim()) {
        throw std::invalid_argument("BayesianGame: valuation dimension");
      }
      if (!(t.budget >= 0.0)) {
        throw std::invalid_argument("BayesianGame: negative budget");
      }
      total += t.probability;
    }
    if (std::abs(total - 1.0) > kProbabilityTol) {
      throw std::invalid_argument("BayesianGame: probabilities must sum to 1");
    }
  }
}

bool BayesianGame::has_budgets() const {
  for (const auto& list : types_) {
    for (const auto& t : list) {
      if (std::isfinite(t.budget)) return true;
    }
  }
  return false;
}

Instance BayesianGame::Realize(const std::vector<int>& type_profile) const {
  std::vector<Valuation> values;
  std::vector<double> budgets;
  for (int i = 0; i < num_agents(); ++i) {
    values.push_back(type(i, type_profile[i]).valuation);
    budgets.push_back(type(i, type_profile[i]).budget);
  }
  if (!has_budgets()) return Instance(mechanism_, std::move(values));
  return Instance(mechanism_, std::move(values), std::move(budgets));
}

std::uint64_t BayesianGame::NumTypeProfiles() const {
  std::uint64_t total = 1;
  for (const auto& list : types_) total *= list.size();
  return total;
}

void BayesianGame::ForEachTypeProfile(
    const std::function<void(const std::vector<int>&, double)>& fn) const {
  const int n = num_agents();
  std::vector<int> index(n, 0);
  while (true) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= types_[i][index[i]].probability;
    if (p > 0.0) fn(index, p);
    int i = n - 1;
    while (i >= 0 && ++index[i] == num_types(i)) {
      index[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
}

void ValidateStrategy(const BayesianGame& game, const StrategyMap& strategy) {
  if (static_cast<int>(strategy.size()) != game.num_agents()) {
    throw std::invalid_argument("strategy: one entry per agent");
  }
  for (int i = 0; i < game.num_agents(); ++i) {
    if (static_cast<int>(strategy[i].size()) != game.num_types(i)) {
      throw std::invalid_argument("strategy: one distribution per type");
    }
    for (const auto& d : strategy[i]) {
      if (d.num_columns() != game.mechanism().num_columns()) {
        throw std::invalid_argument("strategy: bid dimension");
      }
    }
  }
}

std::vector<WeightedBid> MarginalBids(const BayesianGame& game,
                                      const StrategyMap& strategy, int agent) {
  std::vector<WeightedBid> out;
  for (int t = 0; t < game.num_types(agent); ++t) {
    const double pt = game.type(agent, t).probability;
    if (pt <= 0.0) continue;
    const BidDistribution& d = strategy[agent][t];
    if (!d.is_finite()) {
      throw std::invalid_argument("MarginalBids: needs finite supports");
    }
    for (const auto& w : d.support()) {
      out.push_back({w.bid, pt * w.probability});
    }
  }
  return out;
}

double BayesianExpectedWelfare(const BayesianGame& game,
                               const StrategyMap& strategy) {
  ValidateStrategy(game, strategy);
  double total = 0.0;
  ForEachOutcome(game, strategy,
                 [&](const std::vector<int>& types, const BidProfile& bids,
                     double p) { total += p * WelfareAt(game, types, bids); });
  return total;
}

Estimate BayesianWelfareMonteCarlo(const BayesianGame& game,
                                   const StrategyMap& strategy,
                                   std::uint64_t samples, std::uint64_t seed) {
  ValidateStrategy(game, strategy);
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  const int n = game.num_agents();
  std::vector<std::discrete_distribution<int>> type_draw;
  for (int i = 0; i < n; ++i) {
    std::vector<double> w;
    for (const auto& t : game.types()[i]) w.push_back(t.probability);
    type_draw.emplace_back(w.begin(), w.end());
  }
  Rng rng(seed);
  Matrix bids(n, game.mechanism().num_columns());
  std::vector<int> types(n);
  // Welford's update keeps the mean exact to rounding when every sample
  // agrees, which the closed-form comparisons rely on.
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (int i = 0; i < n; ++i) {
      types[i] = type_draw[i](rng);
      const BidVector b = strategy[i][types[i]].Sample(rng);
      std::copy(b.begin(), b.end(), bids.row(i).begin());
    }
    const double w = WelfareAt(game, types, BidProfile(bids));
    const double delta = w - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (w - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / samples), samples};
}

double BayesianOptimalWelfare(const BayesianGame& game,
                              const WelfareOptions& options) {
  double total = 0.0;
  game.ForEachTypeProfile([&](const std::vector<int>& types, double p) {
    total += p * OptimalWelfare(game.Realize(types), options).value;
  });
  return total;
}

double BayesianInterimEffectiveWelfare(const BayesianGame& game,
                                       const StrategyMap& strategy) {
  ValidateStrategy(game, strategy);
  const int n = game.num_agents();
  // value[i][t] accumulates P(t_i = t) * E[v_i(x_i) | t_i = t].
  std::vector<std::vector<double>> value(n);
  for (int i = 0; i < n; ++i) value[i].assign(game.num_types(i), 0.0);
  ForEachOutcome(game, strategy,
                 [&](const std::vector<int>& types, const BidProfile& bids,
                     double p) {
                   const Allocation alloc = game.mechanism().Allocate(bids);
                   for (int i = 0; i < n; ++i) {
                     value[i][types[i]] +=
                         p * game.type(i, types[i]).valuation.EvalUnchecked(
                                 alloc.row(i));
                   }
                 });
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < game.num_types(i); ++t) {
      const AgentType& type = game.type(i, t);
      if (type.probability <= 0.0) continue;
      total += type.probability *
               std::min(value[i][t] / type.probability, type.budget);
    }
  }
  return total;
}

}  // namespace proplab
