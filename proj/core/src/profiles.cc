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

#include "proplab/profiles.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace proplab {
namespace {

std::vector<double> Cumulative(const std::vector<double>& probabilities) {
  std::vector<double> out;
  out.reserve(probabilities.size());
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("probabilities must be finite and >= 0");
    }
    total += p;
    out.push_back(total);
  }
  if (out.empty() || std::abs(total - 1.0) > kProbabilityTol) {
    throw std::invalid_argument("probabilities must sum to 1");
  }
  return out;
}

std::size_t PickIndex(const std::vector<double>& cumulative, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, cumulative.back());
  const double u = unit(rng);
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace

CorrelatedProfile::CorrelatedProfile(std::vector<WeightedProfile> support)
    : support_(std::move(support)) {
  std::vector<double> probabilities;
  probabilities.reserve(support_.size());
  for (const auto& w : support_) {
    probabilities.push_back(w.probability);
    if (w.bids.num_agents() != support_.front().bids.num_agents() ||
        w.bids.num_columns() != support_.front().bids.num_columns()) {
      throw std::invalid_argument("CorrelatedProfile: ragged support");
    }
  }
  cumulative_ = Cumulative(probabilities);
}

CorrelatedProfile CorrelatedProfile::PointMass(BidProfile bids) {
  return CorrelatedProfile({WeightedProfile{std::move(bids), 1.0}});
}

int CorrelatedProfile::num_agents() const {
  return support_.empty() ? 0 : support_.front().bids.num_agents();
}

int CorrelatedProfile::num_columns() const {
  return support_.empty() ? 0 : support_.front().bids.num_columns();
}

std::size_t CorrelatedProfile::SampleIndex(Rng& rng) const {
  return PickIndex(cumulative_, rng);
}

Matrix CorrelatedProfile::ExpectedBids() const {
  Matrix out(num_agents(), num_columns());
  for (const auto& w : support_) {
    for (int i = 0; i < out.rows(); ++i) {
      for (int j = 0; j < out.cols(); ++j) {
        out(i, j) += w.probability * w.bids(i, j);
      }
    }
  }
  return out;
}

BidDistribution BidDistribution::PointMass(BidVector bid) {
  return Finite({WeightedBid{std::move(bid), 1.0}});
}

BidDistribution BidDistribution::Finite(std::vector<WeightedBid> support) {
  if (support.empty()) {
    throw std::invalid_argument("BidDistribution: empty support");
  }
  BidDistribution out;
  out.columns_ = static_cast<int>(support.front().bid.size());
  std::vector<double> probabilities;
  for (const auto& w : support) {
    if (static_cast<int>(w.bid.size()) != out.columns_) {
      throw std::invalid_argument("BidDistribution: ragged support");
    }
    for (double b : w.bid) {
      if (!std::isfinite(b) || b < 0.0) {
        throw std::invalid_argument("BidDistribution: invalid bid");
      }
    }
    probabilities.push_back(w.probability);
  }
  out.cumulative_ = Cumulative(probabilities);
  out.finite_ = std::move(support);
  return out;
}

BidDistribution BidDistribution::FromSampler(int columns, Sampler sampler) {
  if (columns < 1 || !sampler) {
    throw std::invalid_argument("BidDistribution: invalid sampler");
  }
  BidDistribution out;
  out.columns_ = columns;
  out.sampler_ = std::move(sampler);
  return out;
}

BidVector BidDistribution::Sample(Rng& rng) const {
  if (finite_) return (*finite_)[PickIndex(cumulative_, rng)].bid;
  return sampler_(rng);
}

BidProfile SampleProfile(const MixedProfile& profile, Rng& rng) {
  if (profile.empty()) throw std::invalid_argument("empty mixed profile");
  Matrix bids(static_cast<int>(profile.size()), profile.front().num_columns());
  for (int i = 0; i < bids.rows(); ++i) {
    BidVector b = profile[i].Sample(rng);
    if (static_cast<int>(b.size()) != bids.cols()) {
      throw std::invalid_argument("sampler returned the wrong dimension");
    }
    std::copy(b.begin(), b.end(), bids.row(i).begin());
  }
  return BidProfile(std::move(bids));
}

CorrelatedProfile ProductDistribution(const MixedProfile& profile,
                                      std::size_t max_support) {
  if (profile.empty()) throw std::invalid_argument("empty mixed profile");
  std::size_t total = 1;
  for (const auto& d : profile) {
    if (!d.is_finite()) {
      throw std::invalid_argument("ProductDistribution: needs finite supports");
    }
    total *= d.support().size();
    if (total > max_support) {
      throw std::length_error("ProductDistribution: support too large");
    }
  }
  const int n = static_cast<int>(profile.size());
  const int m = profile.front().num_columns();
  std::vector<WeightedProfile> out;
  out.reserve(total);
  std::vector<std::size_t> index(n, 0);
  while (true) {
    Matrix bids(n, m);
    double probability = 1.0;
    for (int i = 0; i < n; ++i) {
      const WeightedBid& w = profile[i].support()[index[i]];
      std::copy(w.bid.begin(), w.bid.end(), bids.row(i).begin());
      probability *= w.probability;
    }
    out.push_back({BidProfile(std::move(bids)), probability});
    int i = n - 1;
    while (i >= 0 && ++index[i] == profile[i].support().size()) {
      index[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  // Products of normalized weights can drift by a few ulps.
  double sum = 0.0;
  for (const auto& w : out) sum += w.probability;
  for (auto& w : out) w.probability /= sum;
  return CorrelatedProfile(std::move(out));
}

PriceDistribution PricesFromProfile(const BidProfile& bids, int agent) {
  return {PriceScenario{OpponentTotals(bids, agent), 1.0}};
}

PriceDistribution PricesFromCorrelated(const CorrelatedProfile& dist,
                                       int agent) {
  PriceDistribution out;
  out.reserve(dist.support().size());
  for (const auto& w : dist.support()) {
    out.push_back({OpponentTotals(w.bids, agent), w.probability});
  }
  return out;
}

double ExpectedUtility(const Mechanism& mechanism, int agent,
                       const Valuation& valuation,
                       std::span<const double> bid,
                       const PriceDistribution& prices) {
  std::vector<double> scratch(mechanism.allocation_dim());
  double value = 0.0;
  for (const auto& s : prices) {
    mechanism.Share(agent, bid, s.totals, scratch);
    value += s.weight * valuation.EvalUnchecked(scratch);
  }
  return value - Payment(bid);
}

}  // namespace proplab
