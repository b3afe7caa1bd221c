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

#include "proplab/deviations.h"

#include <algorithm>
#include <cmath>

namespace proplab {
namespace {

std::vector<double> Indicator(int m, const std::vector<bool>& in) {
  std::vector<double> x(m, 0.0);
  for (int j = 0; j < m; ++j) x[j] = in[j] ? 1.0 : 0.0;
  return x;
}

struct SetTest {
  const Valuation& capped;
  std::span<const double> share;
  std::span<const double> prices;
  double lambda;

  bool Qualifies(const std::vector<bool>& in) const {
    double rhs = 0.0;
    bool any = false;
    for (std::size_t j = 0; j < in.size(); ++j) {
      if (!in[j]) continue;
      any = true;
      rhs += share[j] * prices[j];
    }
    if (!any) return false;
    const int m = static_cast<int>(in.size());
    return capped.EvalUnchecked(Indicator(m, in)) < rhs / lambda;
  }
};

void Accumulate(double x, double& sum, double& sum_sq) {
  sum += x;
  sum_sq += x * x;
}

double MeanVariance(double sum, double sum_sq, std::uint64_t n,
                    double& variance) {
  const double mean = sum / n;
  variance = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1));
  return mean;
}

void RequireStandard(const Instance& instance) {
  if (instance.mechanism().polyhedral()) {
    throw std::invalid_argument("deviation bounds need the standard mechanism");
  }
}

}  // namespace

DeviationSampler::DeviationSampler(std::vector<double> share,
                                   std::vector<std::vector<double>> prices,
                                   double scale, double budget)
    : share_(std::move(share)),
      prices_(std::move(prices)),
      scale_(scale),
      budget_(budget) {
  if (prices_.empty()) {
    throw std::invalid_argument("DeviationSampler: empty price sample set");
  }
  for (double o : share_) {
    if (!(o >= 0.0 && o <= 1.0 + kFeasibilityTol)) {
      throw std::invalid_argument("DeviationSampler: shares must be in [0,1]");
    }
  }
  for (const auto& p : prices_) {
    if (p.size() != share_.size()) {
      throw std::invalid_argument("DeviationSampler: price dimension");
    }
  }
  if (!(scale_ > 0.0) || !(budget_ >= 0.0)) {
    throw std::invalid_argument("DeviationSampler: scale > 0, budget >= 0");
  }
}

BidVector DeviationSampler::BidFor(std::size_t index) const {
  const auto& p = prices_.at(index);
  BidVector bid(share_.size());
  for (std::size_t j = 0; j < bid.size(); ++j) bid[j] = scale_ * share_[j] * p[j];
  // The truncated prices keep the bid within budget up to rounding.
  if (std::isfinite(budget_) &&
      Payment(bid) > budget_ + 1e-12 * std::max(1.0, budget_)) {
    throw InvariantViolation("deviation bid exceeds the budget");
  }
  return bid;
}

BidVector DeviationSampler::Sample(Rng& rng) const {
  std::uniform_int_distribution<std::size_t> pick(0, prices_.size() - 1);
  return BidFor(pick(rng));
}

DeviationSampler PriceMatchingDeviation(
    std::span<const double> share, std::vector<std::vector<double>> prices) {
  return DeviationSampler(std::vector<double>(share.begin(), share.end()),
                          std::move(prices), 1.0);
}

std::vector<int> TruncationSet(const Valuation& capped,
                               std::span<const double> share,
                               std::span<const double> prices, double lambda) {
  if (!(lambda >= 1.0)) throw std::invalid_argument("TruncationSet: lambda");
  const int m = static_cast<int>(share.size());
  if (m > kMaxTruncationColumns) {
    throw std::length_error("TruncationSet: more than 20 columns");
  }
  if (static_cast<int>(prices.size()) != m || capped.dim() != m) {
    throw std::invalid_argument("TruncationSet: dimension mismatch");
  }
  const SetTest test{capped, share, prices, lambda};
  std::vector<bool> in(m, true);
  if (test.Qualifies(in)) {
    std::vector<int> all(m);
    for (int j = 0; j < m; ++j) all[j] = j;
    return all;
  }
  in.assign(m, false);
  while (true) {
    bool grew = false;
    for (int j = 0; j < m; ++j) {
      if (in[j]) continue;
      in[j] = true;
      if (test.Qualifies(in)) {
        grew = true;
      } else {
        in[j] = false;
      }
    }
    if (grew) continue;
    // No single addition works; a larger qualifying superset may remain.
    std::vector<int> rest;
    for (int j = 0; j < m; ++j) {
      if (!in[j]) rest.push_back(j);
    }
    const std::uint64_t limit = std::uint64_t{1} << rest.size();
    bool jumped = false;
    for (std::uint64_t mask = 1; mask < limit && !jumped; ++mask) {
      std::vector<bool> trial = in;
      for (std::size_t k = 0; k < rest.size(); ++k) {
        if (mask >> k & 1) trial[rest[k]] = true;
      }
      if (test.Qualifies(trial)) {
        in = std::move(trial);
        jumped = true;
      }
    }
    if (!jumped) break;
  }
  std::vector<int> out;
  for (int j = 0; j < m; ++j) {
    if (in[j]) out.push_back(j);
  }
  return out;
}

std::vector<double> TruncatePrices(const Valuation& capped,
                                   std::span<const double> share,
                                   std::span<const double> prices,
                                   double lambda) {
  std::vector<double> out(prices.begin(), prices.end());
  for (int j : TruncationSet(capped, share, prices, lambda)) out[j] = 0.0;
  return out;
}

DeviationSampler TruncatedPriceDeviation(
    const Valuation& capped, std::span<const double> share,
    const std::vector<std::vector<double>>& prices, double lambda,
    double budget) {
  std::vector<std::vector<double>> truncated;
  truncated.reserve(prices.size());
  for (const auto& p : prices) {
    truncated.push_back(TruncatePrices(capped, share, p, lambda));
  }
  return DeviationSampler(std::vector<double>(share.begin(), share.end()),
                          std::move(truncated), 1.0 / lambda, budget);
}

std::vector<std::vector<double>> SamplePrices(const CorrelatedProfile& play,
                                              int agent, std::uint64_t draws,
                                              Rng& rng) {
  std::vector<std::vector<double>> out;
  out.reserve(draws);
  for (std::uint64_t d = 0; d < draws; ++d) {
    out.push_back(OpponentTotals(play.support()[play.SampleIndex(rng)].bids,
                                 agent));
  }
  return out;
}

InequalityCheck CheckPriceMatchingBound(const Instance& instance,
                                        const CorrelatedProfile& play,
                                        const Allocation& optimal,
                                        std::uint64_t draws,
                                        std::uint64_t seed, double slack) {
  RequireStandard(instance);
  if (draws < 2) throw std::invalid_argument("need at least 2 draws");
  const Mechanism& mech = instance.mechanism();
  std::vector<double> scratch(mech.allocation_dim());
  InequalityCheck check;
  check.draws = draws;
  check.slack = slack;
  double variance_total = 0.0;
  for (int i = 0; i < instance.num_agents(); ++i) {
    Rng rng(seed + 7919 * static_cast<std::uint64_t>(i));
    const DeviationSampler dev =
        PriceMatchingDeviation(optimal.row(i), SamplePrices(play, i, draws, rng));
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t d = 0; d < draws; ++d) {
      const BidVector a = dev.Sample(rng);
      const auto p =
          OpponentTotals(play.support()[play.SampleIndex(rng)].bids, i);
      Accumulate(
          UtilityAgainst(mech, i, instance.valuation(i), a, p, scratch), sum,
          sum_sq);
    }
    double var = 0.0;
    check.lhs += MeanVariance(sum, sum_sq, draws, var);
    variance_total += var / draws;
    check.rhs += 0.5 * instance.valuation(i).EvalUnchecked(optimal.row(i));
  }
  const Matrix expected = play.ExpectedBids();
  for (int i = 0; i < expected.rows(); ++i) {
    for (int j = 0; j < expected.cols(); ++j) check.rhs -= expected(i, j);
  }
  check.std_error = std::sqrt(variance_total);
  check.holds = check.lhs >= check.rhs - slack;
  return check;
}

InequalityCheck CheckTruncatedDeviationBound(const Instance& instance,
                                             int agent,
                                             const CorrelatedProfile& play,
                                             const Allocation& optimal,
                                             double lambda,
                                             std::uint64_t draws,
                                             std::uint64_t seed, double slack) {
  RequireStandard(instance);
  if (draws < 2) throw std::invalid_argument("need at least 2 draws");
  const Mechanism& mech = instance.mechanism();
  const double budget = instance.budget(agent);
  const Valuation capped = Truncate(instance.valuation(agent), budget);
  Rng rng(seed);
  const DeviationSampler dev =
      TruncatedPriceDeviation(capped, optimal.row(agent),
                              SamplePrices(play, agent, draws, rng), lambda,
                              budget);
  std::vector<double> scratch(mech.allocation_dim());
  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t d = 0; d < draws; ++d) {
    const BidVector a = dev.Sample(rng);
    const auto p =
        OpponentTotals(play.support()[play.SampleIndex(rng)].bids, agent);
    Accumulate(
        UtilityAgainst(mech, agent, instance.valuation(agent), a, p, scratch),
        sum, sum_sq);
  }
  InequalityCheck check;
  check.draws = draws;
  check.slack = slack;
  double var = 0.0;
  check.lhs = MeanVariance(sum, sum_sq, draws, var);
  check.std_error = std::sqrt(var / draws);
  check.rhs = capped.EvalUnchecked(optimal.row(agent)) / (lambda + 1.0);
  const Matrix expected = play.ExpectedBids();
  const auto o = optimal.row(agent);
  for (int j = 0; j < expected.cols(); ++j) {
    double column = 0.0;
    for (int k = 0; k < expected.rows(); ++k) column += expected(k, j);
    check.rhs -= o[j] * column / lambda;
  }
  check.holds = check.lhs >= check.rhs - slack;
  return check;
}

}  // namespace proplab
