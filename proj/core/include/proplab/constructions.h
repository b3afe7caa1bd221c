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

#ifndef PROPLAB_CONSTRUCTIONS_H_
#define PROPLAB_CONSTRUCTIONS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "proplab/bayesian.h"
#include "proplab/equilibrium.h"
#include "proplab/mechanism.h"
#include "proplab/profiles.h"

namespace proplab {

// Two agents on m resources. Agent 0 values min_j x_j; agent 1 values
// x_j / sqrt(m) for a resource j drawn uniformly as its private type.
// Agent 0 bids beta on every resource and agent 1 bids delta on its own
// resource, delta = 1 / (sqrt(m) + 1)^2 and beta = sqrt(delta / m) - delta.
struct MinCoordinateGap {
  int m = 0;
  double delta = 0.0;
  double beta = 0.0;
  double equilibrium_welfare = 0.0;  // 2 / (sqrt(m) + 1)
  double optimal_welfare = 1.0;
  // m == 1 leaves no gap: the ratio is 1 and the bound is vacuous.
  bool degenerate = false;

  double ratio() const { return optimal_welfare / equilibrium_welfare; }
  double lower_bound() const;  // sqrt(m) / 2
};

struct MinCoordinateBuild {
  BayesianGame game;
  StrategyMap strategy;
  MinCoordinateGap construction;
};

MinCoordinateBuild BuildMinCoordinateGap(int m);

// Per-resource grids: [0, 4 beta] for agent 0 searched coordinate-wise and
// [0, 4 delta] for agent 1.
std::vector<SearchConfig> MinCoordinateDeviationGrids(
    const MinCoordinateGap& construction, double step = 1e-4,
    int refinement_rounds = 3);

// Two threshold agents on m resources under proportional allocation with
// ties to agent 1. Agent 0 (ThresholdLow(1/2, v), v = V / sqrt(m)) bids
// y ~ G on one uniform resource; agent 1 (ThresholdHigh(1/2, V)) bids a
// common z ~ F on all of them.
struct ScaleFreeGap {
  int m = 0;
  double V = 0.0;
  double v = 0.0;
  double cap = 0.0;  // V / m, the top of both supports
  double threshold = 0.5;
  bool atom_removed = false;

  double G(double y) const;
  double F(double z) const;
  double InverseG(double u) const;
  double InverseF(double u) const;
  double atom() const { return F(0.0); }

  double optimal_welfare() const { return 2.0 * (V + v); }
  // V (1 + 3 / sqrt(m)).
  double welfare_upper_bound() const;
  // 2 (1 + 1/sqrt(m)) / (1 + 3/sqrt(m)).
  double ratio_bound() const;
  // Exact E[SW] of the profile.
  double expected_welfare() const;
  // Agent 0's expected utility from any single-resource bid y in (0, cap].
  double single_bid_utility(double y) const;
};

struct ScaleFreeBuild {
  Instance instance;
  MixedProfile profile;
  ScaleFreeGap construction;
};

// With remove_atom, F is replaced by the uniform law on [0, V/m]; the
// profile is then no longer an equilibrium.
ScaleFreeBuild BuildScaleFree(int m, double V, bool remove_atom = false);

// Structured deviation sets: agent 0 bids y on its first k resources, agent 1
// bids z on all, all but k, or a single resource; y and z on a grid of
// `points` values over [0, 2 V/m].
std::vector<SearchConfig> ScaleFreeDeviationGrids(
    const ScaleFreeGap& construction, int points = 21);

// Polyhedral instance x_0 + x_1 <= 1 with PolyJump(eps) and eps * x; both
// agents bid eps / 4.
struct PolyhedralGap {
  double eps = 0.0;
  double bid = 0.0;
  double equilibrium_welfare = 0.0;  // 1 + eps
  double optimal_welfare = 2.0;

  double ratio() const { return optimal_welfare / equilibrium_welfare; }
};

struct PolyhedralGapBuild {
  Instance instance;
  BidProfile profile;
  PolyhedralGap construction;
};

PolyhedralGapBuild BuildPolyhedralGap(double eps);

struct NamedInstance {
  std::string id;
  Instance instance;
};

// Budgeted single-resource and two-resource instances with concave and
// subadditive valuations; budgets range over zero, binding and slack.
std::vector<NamedInstance> BuildBudgetSuite(std::uint64_t seed,
                                            int count = 50);

struct NamedGame {
  std::string id;
  BayesianGame game;
};

// Single-resource Bayesian games with 2 to 4 concave budgeted types per
// agent.
std::vector<NamedGame> BuildBudgetBayesianSuite(std::uint64_t seed,
                                                int count = 10);

// Single-resource instances, 2 to 4 agents with random concave
// piecewise-linear valuations.
std::vector<NamedInstance> BuildConcaveSuite(std::uint64_t seed,
                                             int count = 50);

// Polyhedral instances, 2 or 3 agents, one or two constraint rows, with
// linear, concave and PolyJump valuations.
std::vector<NamedInstance> BuildPolyhedralSuite(std::uint64_t seed,
                                                int count = 50);

// Fixed subadditive instances on one and two resources for no-regret
// learning, with values small enough for a 0.01 bid grid.
std::vector<NamedInstance> BuildSubadditiveSuite();

struct NamedValuation {
  std::string id;
  Valuation valuation;
  bool subadditive = true;  // expected verdict of CheckSubadditive
};

// One or more representatives of every serializable family, including the
// budget-truncated wrapper, and the non-subadditive geometric mean and
// min-coordinate valuations.
std::vector<NamedValuation> BuildValuationSamples();

}  // namespace proplab

#endif  // PROPLAB_CONSTRUCTIONS_H_
