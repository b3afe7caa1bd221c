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

#ifndef PROPLAB_BAYESIAN_H_
#define PROPLAB_BAYESIAN_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "proplab/mechanism.h"
#include "proplab/profiles.h"
#include "proplab/welfare.h"

namespace proplab {

struct AgentType {
  Valuation valuation;
  double probability = 0.0;
  double budget = std::numeric_limits<double>::infinity();
};

// Finite, independent type distributions: types[i] lists agent i's types.
using TypeSpace = std::vector<std::vector<AgentType>>;

// strategy[i][t]: bid distribution of agent i when its type is t.
using StrategyMap = std::vector<std::vector<BidDistribution>>;

class BayesianGame {
 public:
  BayesianGame(Mechanism mechanism, TypeSpace types);

  const Mechanism& mechanism() const { return mechanism_; }
  const TypeSpace& types() const { return types_; }
  int num_agents() const { return mechanism_.num_agents(); }
  int num_types(int agent) const {
    return static_cast<int>(types_[agent].size());
  }
  const AgentType& type(int agent, int t) const { return types_[agent][t]; }
  bool has_budgets() const;

  // Complete-information instance for one type profile.
  Instance Realize(const std::vector<int>& type_profile) const;

  std::uint64_t NumTypeProfiles() const;
  // Calls fn(type_profile, probability) for every type profile.
  void ForEachTypeProfile(
      const std::function<void(const std::vector<int>&, double)>& fn) const;

 private:
  Mechanism mechanism_;
  TypeSpace types_;
};

// Throws unless every type of every agent has a distribution of the right
// dimension.
void ValidateStrategy(const BayesianGame& game, const StrategyMap& strategy);

// Independent (type, bid) draws of one agent, mixed over its types.
std::vector<WeightedBid> MarginalBids(const BayesianGame& game,
                                      const StrategyMap& strategy, int agent);

// E_{t, b}[SW(b)] by enumeration (finite supports).
double BayesianExpectedWelfare(const BayesianGame& game,
                               const StrategyMap& strategy);

Estimate BayesianWelfareMonteCarlo(const BayesianGame& game,
                                   const StrategyMap& strategy,
                                   std::uint64_t samples, std::uint64_t seed);

// E_t[max_x SW_t(x)] (or effective welfare) over all type profiles.
double BayesianOptimalWelfare(const BayesianGame& game,
                              const WelfareOptions& options);

// sum_i E_{t_i}[min{E[v_i | t_i], c_{t_i}}]: the interim effective welfare.
double BayesianInterimEffectiveWelfare(const BayesianGame& game,
                                       const StrategyMap& strategy);

}  // namespace proplab

#endif  // PROPLAB_BAYESIAN_H_
