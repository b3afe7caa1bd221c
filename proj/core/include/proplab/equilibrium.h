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

#ifndef PROPLAB_EQUILIBRIUM_H_
#define PROPLAB_EQUILIBRIUM_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "proplab/bayesian.h"
#include "proplab/mechanism.h"
#include "proplab/profiles.h"

namespace proplab {

// Bid grid {lower, lower + step, ..., upper}; upper is always included.
struct GridAxis {
  double lower = 0.0;
  double upper = 1.0;
  double step = 0.01;

  std::vector<double> Points() const;
  std::string ToString() const;
};

enum class SearchMode {
  kAuto,        // decomposes or solves analytically when the structure allows
  kJoint,       // full product grid over all columns
  kCoordinate,  // coordinate ascent on the per-column grids
};

struct SearchConfig {
  // One axis per bid column, or a single axis used for every column.
  std::vector<GridAxis> axes = {GridAxis{}};
  // Extra deviations always evaluated.
  std::vector<BidVector> candidates;
  // Evaluate only `candidates` (plus the zero bid).
  bool only_candidates = false;
  SearchMode mode = SearchMode::kAuto;
  // Each round re-grids [best - h, best + h] with step h / refinement_factor.
  int refinement_rounds = 3;
  int refinement_factor = 10;
  int max_sweeps = 8;
  std::uint64_t max_joint_points = 2'000'000;
  // Share grid for the polyhedral equalized-bid search.
  double allocation_step = 1e-3;
  // Scale of the budget-feasible 1/lambda deviations; must be >= 1.
  double lambda = 1.0;
  std::uint64_t seed = 0;

  const GridAxis& AxisFor(int column) const;
  void Validate(int columns) const;
  std::string ToString() const;
};

struct BestResponseResult {
  BidVector bid;
  double utility = -std::numeric_limits<double>::infinity();
  std::uint64_t evaluations = 0;
  std::string method;
};

// argmax_b v * b / (b + p) - b = max(0, sqrt(v p) - p) for p > 0.
double BestResponseLinear(double slope, double price);

// Best bid against a distribution of opponent totals, subject to
// sum(bid) <= budget. `start`, when given, is evaluated and seeds coordinate
// ascent, so the result never does worse than it.
BestResponseResult BestResponse(const Mechanism& mechanism, int agent,
                                const Valuation& valuation, double budget,
                                const PriceDistribution& prices,
                                const SearchConfig& config,
                                const std::optional<BidVector>& start = {});

BestResponseResult BestResponse(const Instance& instance, int agent,
                                const BidProfile& bids,
                                const SearchConfig& config);

struct AgentDeviation {
  int agent = 0;
  int type = -1;  // -1 outside Bayesian games
  double equilibrium_utility = 0.0;
  double deviation_utility = 0.0;
  double eps = 0.0;  // max(0, deviation - equilibrium)
  double ci_halfwidth = 0.0;
  BidVector best_deviation;
};

struct EquilibriumReport {
  std::string kind;  // "pure", "mixed" or "bayesian"
  std::vector<AgentDeviation> deviations;
  double eps = 0.0;
  double ci_halfwidth = 0.0;  // of the agent attaining eps
  std::string grid;
  std::uint64_t samples = 0;
  double tolerance = 0.0;
  bool verdict = false;  // eps <= tolerance

  double AgentEps(int agent) const;
};

// `configs` holds one config per agent, or one shared config.
EquilibriumReport VerifyPureNe(const Instance& instance,
                               const BidProfile& bids,
                               const std::vector<SearchConfig>& configs,
                               double tolerance);

// Monte Carlo with common random numbers: the same `samples` joint draws
// score the equilibrium and every deviation. Throws unless samples >= 100.
EquilibriumReport VerifyMixedNe(const Instance& instance,
                                const MixedProfile& profile,
                                std::uint64_t samples,
                                const std::vector<SearchConfig>& configs,
                                std::uint64_t seed, double tolerance);

struct MonteCarloOptions {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Interim check per (agent, type). Exact enumeration of opponents' types and
// bids; throws std::length_error past 1e7 price scenarios unless Monte Carlo
// options are supplied.
EquilibriumReport VerifyBayesianNe(
    const BayesianGame& game, const StrategyMap& strategy,
    const std::vector<SearchConfig>& configs, double tolerance,
    const std::optional<MonteCarloOptions>& monte_carlo = {});

// Opponent price distribution faced by `agent` in a Bayesian game.
PriceDistribution BayesianPrices(const BayesianGame& game,
                                 const StrategyMap& strategy, int agent,
                                 std::uint64_t max_scenarios = 10'000'000);

struct BrDynamicsOptions {
  int max_rounds = 200;
  double tolerance = 1e-9;  // on the largest bid change in a round
  // New bid = damping * old + (1 - damping) * best response. Fixed points
  // are unchanged; damping > 0 breaks best-response 2-cycles.
  double damping = 0.0;
};

struct BrDynamicsResult {
  BidProfile profile;
  std::vector<BidProfile> trace;  // profile after each round
  bool converged = false;
  int rounds = 0;
  double residual = 0.0;  // largest bid change in the last round
};

// Round-robin best responses; each agent sees the latest bids.
BrDynamicsResult BrDynamics(const Instance& instance, const BidProfile& start,
                            const std::vector<SearchConfig>& configs,
                            const BrDynamicsOptions& options = {});

struct BayesianBrResult {
  std::vector<std::vector<BidVector>> bids;  // [agent][type]
  bool converged = false;
  int rounds = 0;
  double residual = 0.0;

  StrategyMap Strategy() const;
};

// Round-robin interim best responses with type-contingent pure bids.
BayesianBrResult BayesianBrDynamics(
    const BayesianGame& game, std::vector<std::vector<BidVector>> start,
    const std::vector<SearchConfig>& configs,
    const BrDynamicsOptions& options = {});

}  // namespace proplab

#endif  // PROPLAB_EQUILIBRIUM_H_
