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

#ifndef PROPLAB_DEVIATIONS_H_
#define PROPLAB_DEVIATIONS_H_

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "proplab/mechanism.h"
#include "proplab/profiles.h"

namespace proplab {

// Raised when a guaranteed invariant fails; always an implementation bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Randomized bid scale * (o_j * p_j)_j with p drawn uniformly from a stored
// set of price vectors.
class DeviationSampler {
 public:
  DeviationSampler(std::vector<double> share,
                   std::vector<std::vector<double>> prices, double scale,
                   double budget = std::numeric_limits<double>::infinity());

  // Throws InvariantViolation if the drawn bid exceeds the budget.
  BidVector Sample(Rng& rng) const;
  BidVector BidFor(std::size_t index) const;

  std::size_t num_prices() const { return prices_.size(); }
  const std::vector<std::vector<double>>& prices() const { return prices_; }
  double budget() const { return budget_; }

 private:
  std::vector<double> share_;
  std::vector<std::vector<double>> prices_;
  double scale_;
  double budget_;
};

// Bids o_ij times a price vector drawn from the opponents' own totals.
DeviationSampler PriceMatchingDeviation(
    std::span<const double> share, std::vector<std::vector<double>> prices);

inline constexpr int kMaxTruncationColumns = 20;

// An inclusion-maximal T with v(1_T) < (1/lambda) sum_{j in T} o_j p_j for
// a budget-capped valuation v; empty when no nonempty set qualifies.
// Requires lambda >= 1 and at most 20 columns.
std::vector<int> TruncationSet(const Valuation& capped,
                               std::span<const double> share,
                               std::span<const double> prices, double lambda);

// Prices with the columns of TruncationSet(...) set to zero.
std::vector<double> TruncatePrices(const Valuation& capped,
                                   std::span<const double> share,
                                   std::span<const double> prices,
                                   double lambda);

// Bids (1/lambda) o_ij times a truncated price vector; every emitted bid
// totals at most `budget`, which is asserted on every draw.
DeviationSampler TruncatedPriceDeviation(
    const Valuation& capped, std::span<const double> share,
    const std::vector<std::vector<double>>& prices, double lambda,
    double budget);

struct InequalityCheck {
  double lhs = 0.0;  // Monte Carlo estimate
  double rhs = 0.0;
  double std_error = 0.0;
  double slack = 0.0;
  std::uint64_t draws = 0;
  bool holds = false;  // lhs >= rhs - slack
};

// sum_i u_i(a_i, B_-i) >= 1/2 sum_i v_i(o_i) - sum_ij E[b_ij] for the
// price-matching deviations against a joint bid distribution.
InequalityCheck CheckPriceMatchingBound(const Instance& instance,
                                        const CorrelatedProfile& play,
                                        const Allocation& optimal,
                                        std::uint64_t draws,
                                        std::uint64_t seed, double slack);

// u_i(a_i, B_-i) >= v_i^c(o_i) / (lambda + 1)
//                   - (1/lambda) sum_j o_ij sum_k E[b_kj]
// for the truncated-price deviation of one budgeted agent.
InequalityCheck CheckTruncatedDeviationBound(const Instance& instance,
                                             int agent,
                                             const CorrelatedProfile& play,
                                             const Allocation& optimal,
                                             double lambda,
                                             std::uint64_t draws,
                                             std::uint64_t seed, double slack);

// Draws the opponents' totals faced by `agent` from a joint distribution.
std::vector<std::vector<double>> SamplePrices(const CorrelatedProfile& play,
                                              int agent, std::uint64_t draws,
                                              Rng& rng);

}  // namespace proplab

#endif  // PROPLAB_DEVIATIONS_H_
