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

#ifndef PROPLAB_PROFILES_H_
#define PROPLAB_PROFILES_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "proplab/mechanism.h"

namespace proplab {

using Rng = std::mt19937_64;

inline constexpr double kProbabilityTol = 1e-12;

struct WeightedProfile {
  BidProfile bids;
  double probability = 0.0;
};

// Finite joint distribution over bid profiles; the object a coarse
// correlated equilibrium lives in.
class CorrelatedProfile {
 public:
  CorrelatedProfile() = default;
  // Throws unless probabilities are >= 0 and sum to 1 within 1e-12.
  explicit CorrelatedProfile(std::vector<WeightedProfile> support);
  static CorrelatedProfile PointMass(BidProfile bids);

  const std::vector<WeightedProfile>& support() const { return support_; }
  int num_agents() const;
  int num_columns() const;

  // Index into support() drawn by probability.
  std::size_t SampleIndex(Rng& rng) const;
  // E[b_ij] per agent and column.
  Matrix ExpectedBids() const;

 private:
  std::vector<WeightedProfile> support_;
  std::vector<double> cumulative_;
};

struct WeightedBid {
  BidVector bid;
  double probability = 0.0;
};

// One agent's randomized bid: a finite support, or a seeded sampler for
// continuous constructions.
class BidDistribution {
 public:
  using Sampler = std::function<BidVector(Rng&)>;

  static BidDistribution PointMass(BidVector bid);
  static BidDistribution Finite(std::vector<WeightedBid> support);
  static BidDistribution FromSampler(int columns, Sampler sampler);

  int num_columns() const { return columns_; }
  bool is_finite() const { return finite_.has_value(); }
  const std::vector<WeightedBid>& support() const { return *finite_; }

  BidVector Sample(Rng& rng) const;

 private:
  BidDistribution() = default;

  int columns_ = 0;
  std::optional<std::vector<WeightedBid>> finite_;
  std::vector<double> cumulative_;
  Sampler sampler_;
};

// Product distribution: independent randomized bids per agent.
using MixedProfile = std::vector<BidDistribution>;

// Draws one joint profile from a mixed profile.
BidProfile SampleProfile(const MixedProfile& profile, Rng& rng);

// Enumerates a mixed profile with finite supports into a correlated one;
// throws std::length_error past `max_support` joint outcomes.
CorrelatedProfile ProductDistribution(const MixedProfile& profile,
                                      std::size_t max_support = 10'000'000);

// Distribution of the opponents' per-column totals p_i faced by one agent.
struct PriceScenario {
  std::vector<double> totals;
  double weight = 0.0;
};
using PriceDistribution = std::vector<PriceScenario>;

PriceDistribution PricesFromProfile(const BidProfile& bids, int agent);
PriceDistribution PricesFromCorrelated(const CorrelatedProfile& dist,
                                       int agent);

// E_p[u_i(bid, p)] over a price distribution.
double ExpectedUtility(const Mechanism& mechanism, int agent,
                       const Valuation& valuation,
                       std::span<const double> bid,
                       const PriceDistribution& prices);

}  // namespace proplab

#endif  // PROPLAB_PROFILES_H_
