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

#include "proplab/learning.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace proplab {

ActionGrid ActionGrid::Product(int columns, const GridAxis& axis,
                               double max_total) {
  if (columns < 1) throw std::invalid_argument("ActionGrid: columns >= 1");
  const std::vector<double> points = axis.Points();
  ActionGrid grid;
  BidVector bid(columns, points.front());
  std::vector<std::size_t> index(columns, 0);
  while (true) {
    for (int j = 0; j < columns; ++j) bid[j] = points[index[j]];
    if (Payment(bid) <= max_total + 1e-12) {
      grid.actions.push_back(bid);
      if (grid.actions.size() > kMaxHedgeActions) {
        throw std::length_error("ActionGrid: more than 1e5 actions");
      }
    }
    int j = columns - 1;
    while (j >= 0 && ++index[j] == points.size()) {
      index[j] = 0;
      --j;
    }
    if (j < 0) break;
  }
  return grid;
}

HedgeResult HedgeLearn(const Instance& instance,
                       const std::vector<ActionGrid>& grids,
                       const HedgeOptions& options) {
  const Mechanism& mech = instance.mechanism();
  const int n = instance.num_agents();
  const int m = mech.num_columns();
  if (static_cast<int>(grids.size()) != n) {
    throw std::invalid_argument("HedgeLearn: one action grid per agent");
  }
  if (options.rounds < 1) throw std::invalid_argument("HedgeLearn: rounds");
  if (options.schedule.kind == StepKind::kConstant &&
      !(options.schedule.eta > 0.0)) {
    throw std::invalid_argument("HedgeLearn: constant step needs eta > 0");
  }

  struct AgentState {
    std::vector<double> bids;  // actions x columns, row-major
    std::vector<double> cost;
    double lo = 0.0, range = 1.0;
    std::vector<double> score;   // cumulative normalized utility
    std::vector<double> payoff;  // cumulative raw utility
    std::vector<double> weight;
    double realized = 0.0;
  };
  std::vector<AgentState> agents(n);
  for (int i = 0; i < n; ++i) {
    const auto& actions = grids[i].actions;
    if (actions.empty() || actions.size() > kMaxHedgeActions) {
      throw std::length_error("HedgeLearn: action set must hold 1..1e5 bids");
    }
    AgentState& a = agents[i];
    double max_cost = 0.0;
    for (const auto& b : actions) {
      if (static_cast<int>(b.size()) != m) {
        throw std::invalid_argument("HedgeLearn: action dimension");
      }
      a.bids.insert(a.bids.end(), b.begin(), b.end());
      a.cost.push_back(Payment(b));
      max_cost = std::max(max_cost, a.cost.back());
    }
    a.lo = -max_cost;
    a.range = std::max(instance.valuation(i).MaxValue() + max_cost, 1e-12);
    a.score.assign(actions.size(), 0.0);
    a.payoff.assign(actions.size(), 0.0);
    a.weight.assign(actions.size(), 0.0);
  }

  Rng rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> chosen(n);
  std::vector<double> others(m), scratch(mech.allocation_dim());
  std::map<std::vector<int>, int> counts;
  const double horizon = options.rounds;
  for (int t = 1; t <= options.rounds; ++t) {
    for (int i = 0; i < n; ++i) {
      AgentState& a = agents[i];
      const double size = static_cast<double>(a.score.size());
      double eta = options.schedule.eta;
      if (options.schedule.kind == StepKind::kFixedHorizon) {
        eta = std::sqrt(8.0 * std::log(std::max(size, 2.0)) / horizon);
      } else if (options.schedule.kind == StepKind::kAnytime) {
        eta = std::sqrt(8.0 * std::log(std::max(size, 2.0)) / t);
      }
      const double top = *std::max_element(a.score.begin(), a.score.end());
      double sum = 0.0;
      for (std::size_t k = 0; k < a.score.size(); ++k) {
        a.weight[k] = std::exp(eta * (a.score[k] - top));
        sum += a.weight[k];
      }
      double u = unit(rng) * sum;
      std::size_t pick = a.score.size() - 1;
      for (std::size_t k = 0; k < a.score.size(); ++k) {
        u -= a.weight[k];
        if (u < 0.0) {
          pick = k;
          break;
        }
      }
      chosen[i] = static_cast<int>(pick);
    }
    ++counts[chosen];
    for (int i = 0; i < n; ++i) {
      AgentState& a = agents[i];
      const Valuation& v = instance.valuation(i);
      // Summed per opponent, as OpponentTotals does, rather than by
      // subtraction from the grand total.
      for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k != i) s += agents[k].bids[chosen[k] * m + j];
        }
        others[j] = s;
      }
      for (std::size_t k = 0; k < a.score.size(); ++k) {
        std::span<const double> bid(a.bids.data() + k * m, m);
        mech.Share(i, bid, others, scratch);
        const double util = v.EvalUnchecked(scratch) - a.cost[k];
        a.payoff[k] += util;
        a.score[k] += (util - a.lo) / a.range;
        if (static_cast<int>(k) == chosen[i]) a.realized += util;
      }
    }
  }

  HedgeResult result;
  result.rounds = options.rounds;
  for (int i = 0; i < n; ++i) {
    const AgentState& a = agents[i];
    const double best = *std::max_element(a.payoff.begin(), a.payoff.end());
    result.regret.push_back(best - a.realized);
    result.average_utility.push_back(a.realized / horizon);
  }
  std::vector<WeightedProfile> support;
  support.reserve(counts.size());
  for (const auto& [profile, count] : counts) {
    Matrix bids(n, m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        bids(i, j) = agents[i].bids[profile[i] * m + j];
      }
    }
    support.push_back({BidProfile(std::move(bids)), count / horizon});
  }
  double sum = 0.0;
  for (const auto& w : support) sum += w.probability;
  for (auto& w : support) w.probability /= sum;
  result.play = CorrelatedProfile(std::move(support));
  return result;
}

}  // namespace proplab
