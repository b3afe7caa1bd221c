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

#ifndef PROPLAB_LEARNING_H_
#define PROPLAB_LEARNING_H_

#include <cstdint>
#include <limits>
#include <vector>

#include "proplab/equilibrium.h"
#include "proplab/mechanism.h"
#include "proplab/profiles.h"

namespace proplab {

inline constexpr std::size_t kMaxHedgeActions = 100'000;

// Finite action set of one agent: bid vectors.
struct ActionGrid {
  std::vector<BidVector> actions;

  // Product of `axis` over every column, keeping vectors whose total is at
  // most max_total (bids above v_i(1) are dominated by bidding 0). Throws
  // std::length_error past kMaxHedgeActions.
  static ActionGrid Product(int columns, const GridAxis& axis,
                            double max_total =
                                std::numeric_limits<double>::infinity());
};

enum class StepKind {
  kFixedHorizon,  // eta = sqrt(8 ln N / T)
  kAnytime,       // eta_t = sqrt(8 ln N / t)
  kConstant,      // eta as given
};

struct StepSchedule {
  StepKind kind = StepKind::kFixedHorizon;
  double eta = 0.0;  // kConstant only
};

struct HedgeOptions {
  int rounds = 10'000;
  StepSchedule schedule;
  std::uint64_t seed = 0;
};

struct HedgeResult {
  CorrelatedProfile play;  // empirical distribution of joint play
  std::vector<double> regret;  // max_a sum_t u(a) - sum_t u(played)
  std::vector<double> average_utility;
  int rounds = 0;

  double RegretPerRound(int agent) const { return regret[agent] / rounds; }
};

// Multiplicative weights with full-information feedback; utilities are
// rescaled to [0, 1] by the agent's value and bid range.
HedgeResult HedgeLearn(const Instance& instance,
                       const std::vector<ActionGrid>& grids,
                       const HedgeOptions& options);

}  // namespace proplab

#endif  // PROPLAB_LEARNING_H_
