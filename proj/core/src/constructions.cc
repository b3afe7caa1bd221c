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

#include "proplab/constructions.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace proplab {
namespace {

double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int UniformInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Random concave curve with `segments` pieces and f(1) near `scale`.
ConcaveCurve RandomCurve(Rng& rng, int segments, double lo_slope,
                         double hi_slope) {
  std::vector<double> slopes(segments), lengths(segments);
  for (auto& s : slopes) s = Uniform(rng, lo_slope, hi_slope);
  std::sort(slopes.begin(), slopes.end(), std::greater<>());
  for (auto& l : lengths) l = Uniform(rng, 0.1, 1.0);
  const double total = std::accumulate(lengths.begin(), lengths.end(), 0.0);
  for (auto& l : lengths) l /= total;
  return ConcaveCurve::FromSegments(lengths, slopes);
}

std::string Id(const char* prefix, int index) {
  return std::string(prefix) + "-" + std::to_string(index);
}

// Probabilities summing to one exactly in floating point.
std::vector<double> RandomSimplex(Rng& rng, int k) {
  std::vector<double> w(k);
  for (auto& x : w) x = Uniform(rng, 0.2, 1.0);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  double used = 0.0;
  for (int i = 0; i + 1 < k; ++i) {
    w[i] /= total;
    used += w[i];
  }
  w[k - 1] = 1.0 - used;
  return w;
}

Valuation RandomTwoResource(Rng& rng) {
  switch (UniformInt(rng, 0, 4)) {
    case 0:
      return Valuation::Linear({Uniform(rng, 0.05, 0.3), Uniform(rng, 0.05, 0.3)});
    case 1:
      return Valuation::AdditiveConcave(
          {RandomCurve(rng, UniformInt(rng, 1, 3), 0.02, 0.35),
           RandomCurve(rng, UniformInt(rng, 1, 3), 0.02, 0.35)});
    case 2:
      return Valuation::ThresholdLow(2, 0.5, Uniform(rng, 0.08, 0.25));
    case 3:
      return Valuation::ThresholdHigh(2, 0.5, Uniform(rng, 0.08, 0.25));
    default:
      return Valuation::ScaledCoordinate(2, UniformInt(rng, 0, 1),
                                         Uniform(rng, 0.2, 0.5));
  }
}

// Zero, binding or slack budget relative to the agent's top value.
double RandomBudget(Rng& rng, double top, bool allow_zero) {
  const double r = Uniform(rng, 0.0, 1.0);
  if (allow_zero && r < 0.12) return 0.0;
  if (r < 0.6) return Uniform(rng, 0.1, 0.6) * top;
  return 10.0 * top + 1.0;
}

}  // namespace

double MinCoordinateGap::lower_bound() const { return std::sqrt(m) / 2.0; }

MinCoordinateBuild BuildMinCoordinateGap(int m) {
  if (m < 1) throw std::invalid_argument("BuildMinCoordinateGap: m >= 1");
  const double root = std::sqrt(static_cast<double>(m));
  MinCoordinateGap c;
  c.m = m;
  c.delta = 1.0 / ((root + 1.0) * (root + 1.0));
  c.beta = std::sqrt(c.delta / m) - c.delta;
  c.equilibrium_welfare = 2.0 / (root + 1.0);
  c.optimal_welfare = 1.0;
  c.degenerate = m == 1;

  TypeSpace types(2);
  types[0].push_back({Valuation::MinCoordinate(m, 1.0), 1.0});
  for (int j = 0; j < m; ++j) {
    types[1].push_back({Valuation::ScaledCoordinate(m, j, 1.0 / root),
                        1.0 / m});
  }
  StrategyMap strategy(2);
  strategy[0].push_back(BidDistribution::PointMass(BidVector(m, c.beta)));
  for (int j = 0; j < m; ++j) {
    BidVector bid(m, 0.0);
    bid[j] = c.delta;
    strategy[1].push_back(BidDistribution::PointMass(std::move(bid)));
  }
  return {BayesianGame(Mechanism::Standard(2, m), std::move(types)),
          std::move(strategy), c};
}

std::vector<SearchConfig> MinCoordinateDeviationGrids(
    const MinCoordinateGap& construction, double step,
    int refinement_rounds) {
  SearchConfig first;
  first.axes = {GridAxis{0.0, 4.0 * construction.beta, step}};
  first.mode = SearchMode::kCoordinate;
  first.refinement_rounds = refinement_rounds;
  SearchConfig second;
  second.axes = {GridAxis{0.0, 4.0 * construction.delta, step}};
  second.refinement_rounds = refinement_rounds;
  return {first, second};
}

double ScaleFreeGap::G(double y) const {
  return std::clamp(y / cap, 0.0, 1.0);
}

double ScaleFreeGap::F(double z) const {
  if (z < 0.0) return 0.0;
  if (atom_removed) return std::min(1.0, z / cap);
  return std::min(1.0, (v - cap + z) / v);
}

double ScaleFreeGap::InverseG(double u) const { return u * cap; }

double ScaleFreeGap::InverseF(double u) const {
  if (atom_removed) return u * cap;
  if (u < F(0.0)) return 0.0;
  return std::clamp(cap - v * (1.0 - u), 0.0, cap);
}

double ScaleFreeGap::welfare_upper_bound() const {
  return V * (1.0 + 3.0 / std::sqrt(static_cast<double>(m)));
}

double ScaleFreeGap::ratio_bound() const {
  const double r = 1.0 / std::sqrt(static_cast<double>(m));
  return 2.0 * (1.0 + r) / (1.0 + 3.0 * r);
}

double ScaleFreeGap::expected_welfare() const {
  // P(z >= y > 0) = integral of (1 - F(y)) dG(y) over (0, cap].
  const double lose = atom_removed ? 0.5 : cap / (2.0 * v);
  return (2.0 * v + V) * (1.0 - lose) + (v + 2.0 * V) * lose;
}

double ScaleFreeGap::single_bid_utility(double y) const {
  return v + F(y) * v - y;
}

ScaleFreeBuild BuildScaleFree(int m, double V, bool remove_atom) {
  if (m < 2) throw std::invalid_argument("BuildScaleFree: m >= 2");
  if (!(V > 0.0)) throw std::invalid_argument("BuildScaleFree: V > 0");
  ScaleFreeGap c;
  c.m = m;
  c.V = V;
  c.v = V / std::sqrt(static_cast<double>(m));
  c.cap = V / m;
  c.atom_removed = remove_atom;

  Instance instance(Mechanism::Standard(2, m, TieBreak::ToAgent(1)),
                    {Valuation::ThresholdLow(m, c.threshold, c.v),
                     Valuation::ThresholdHigh(m, c.threshold, V)});
  MixedProfile profile;
  profile.push_back(BidDistribution::FromSampler(m, [c](Rng& rng) {
    std::uniform_int_distribution<int> pick(0, c.m - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    BidVector bid(c.m, 0.0);
    const int l = pick(rng);
    bid[l] = c.InverseG(unit(rng));
    return bid;
  }));
  profile.push_back(BidDistribution::FromSampler(m, [c](Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return BidVector(c.m, c.InverseF(unit(rng)));
  }));
  return {std::move(instance), std::move(profile), c};
}

std::vector<SearchConfig> ScaleFreeDeviationGrids(
    const ScaleFreeGap& construction, int points) {
  if (points < 2) throw std::invalid_argument("need at least 2 grid points");
  const int m = construction.m;
  const double top = 2.0 * construction.cap;
  std::vector<double> values;
  for (int k = 1; k < points; ++k) values.push_back(top * k / (points - 1));

  std::set<int> widths = {1, 2, 3, 5, 10, 25, 50, 100, m};
  SearchConfig first;
  first.axes = {GridAxis{0.0, top, top / (points - 1)}};
  first.only_candidates = true;
  for (int k : widths) {
    if (k > m) continue;
    for (double y : values) {
      BidVector bid(m, 0.0);
      std::fill(bid.begin(), bid.begin() + k, y);
      first.candidates.push_back(std::move(bid));
    }
  }
  SearchConfig second = first;
  second.candidates.clear();
  std::set<int> gaps = {1, 2, 5, 10, m / 2};
  for (double z : values) {
    second.candidates.push_back(BidVector(m, z));
    BidVector single(m, 0.0);
    single[0] = z;
    second.candidates.push_back(std::move(single));
    for (int k : gaps) {
      if (k < 1 || k >= m) continue;
      BidVector bid(m, z);
      std::fill(bid.begin(), bid.begin() + k, 0.0);
      second.candidates.push_back(std::move(bid));
    }
  }
  return {first, second};
}

PolyhedralGapBuild BuildPolyhedralGap(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("BuildPolyhedralGap: 0 < eps < 1");
  }
  PolyhedralGap c;
  c.eps = eps;
  c.bid = eps / 4.0;
  c.equilibrium_welfare = 1.0 + eps;
  c.optimal_welfare = 2.0;
  Instance instance(Mechanism::Polyhedral(Matrix{{1.0, 1.0}}),
                    {Valuation::PolyJump(eps), Valuation::Linear({eps})});
  return {std::move(instance), BidProfile{{c.bid}, {c.bid}}, c};
}

std::vector<NamedInstance> BuildBudgetSuite(std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<NamedInstance> out;
  for (int index = 0; index < count; ++index) {
    const int m = index % 2 == 0 ? 1 : 2;
    const int n = index % 3 == 0 ? 3 : 2;
    std::vector<Valuation> values;
    std::vector<double> budgets;
    bool zero_used = false;
    for (int i = 0; i < n; ++i) {
      values.push_back(m == 1 ? Valuation::AdditiveConcave({RandomCurve(
                                    rng, UniformInt(rng, 1, 3), 0.1, 1.0)})
                              : RandomTwoResource(rng));
      const double c = RandomBudget(rng, values.back().MaxValue(), !zero_used);
      zero_used = zero_used || c == 0.0;
      budgets.push_back(c);
    }
    out.push_back({Id("budget", index),
                   Instance(Mechanism::Standard(n, m), std::move(values),
                            std::move(budgets))});
  }
  return out;
}

std::vector<NamedGame> BuildBudgetBayesianSuite(std::uint64_t seed,
                                                int count) {
  Rng rng(seed);
  std::vector<NamedGame> out;
  for (int index = 0; index < count; ++index) {
    TypeSpace types(2);
    for (int i = 0; i < 2; ++i) {
      const int k = UniformInt(rng, 2, 4);
      const std::vector<double> probabilities = RandomSimplex(rng, k);
      for (int t = 0; t < k; ++t) {
        Valuation v = Valuation::AdditiveConcave(
            {RandomCurve(rng, UniformInt(rng, 1, 3), 0.1, 1.0)});
        const double c = RandomBudget(rng, v.MaxValue(), false);
        types[i].push_back({std::move(v), probabilities[t], c});
      }
    }
    out.push_back({Id("budget-bayes", index),
                   BayesianGame(Mechanism::Standard(2, 1), std::move(types))});
  }
  return out;
}

std::vector<NamedInstance> BuildConcaveSuite(std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<NamedInstance> out;
  for (int index = 0; index < count; ++index) {
    const int n = 2 + index % 3;
    std::vector<Valuation> values;
    for (int i = 0; i < n; ++i) {
      values.push_back(Valuation::AdditiveConcave(
          {RandomCurve(rng, UniformInt(rng, 1, 4), 0.1, 2.0)}));
    }
    out.push_back({Id("concave", index),
                   Instance(Mechanism::Standard(n, 1), std::move(values))});
  }
  return out;
}

std::vector<NamedInstance> BuildPolyhedralSuite(std::uint64_t seed,
                                                int count) {
  Rng rng(seed);
  std::vector<NamedInstance> out;
  for (int index = 0; index < count; ++index) {
    const int n = 2 + index % 2;
    const int rows = 1 + (index / 2) % 2;
    Matrix a(rows, n);
    for (int i = 0; i < n; ++i) {
      bool any = false;
      for (int r = 0; r < rows; ++r) {
        if (Uniform(rng, 0.0, 1.0) < 0.7) {
          a(r, i) = Uniform(rng, 0.5, 1.5);
          any = true;
        }
      }
      if (!any) a(UniformInt(rng, 0, rows - 1), i) = Uniform(rng, 0.5, 1.5);
    }
    std::vector<Valuation> values;
    for (int i = 0; i < n; ++i) {
      switch (UniformInt(rng, 0, 2)) {
        case 0:
          values.push_back(Valuation::Linear({Uniform(rng, 0.2, 1.5)}));
          break;
        case 1:
          values.push_back(Valuation::AdditiveConcave(
              {RandomCurve(rng, UniformInt(rng, 1, 3), 0.1, 1.5)}));
          break;
        default:
          values.push_back(Valuation::PolyJump(Uniform(rng, 0.05, 0.5)));
          break;
      }
    }
    out.push_back({Id("polyhedral", index),
                   Instance(Mechanism::Polyhedral(std::move(a)),
                            std::move(values))});
  }
  return out;
}

std::vector<NamedInstance> BuildSubadditiveSuite() {
  std::vector<NamedInstance> out;
  out.push_back({"linear-pair",
                 Instance(Mechanism::Standard(2, 1),
                          {Valuation::Linear({1.0}), Valuation::Linear({1.0})})});
  out.push_back(
      {"concave-trio",
       Instance(Mechanism::Standard(3, 1),
                {Valuation::AdditiveConcave(
                     {ConcaveCurve::FromSegments({0.3, 0.7}, {1.2, 0.3})}),
                 Valuation::AdditiveConcave(
                     {ConcaveCurve::FromSegments({0.5, 0.5}, {0.8, 0.4})}),
                 Valuation::Linear({0.5})})});
  out.push_back({"jump-linear",
                 Instance(Mechanism::Standard(2, 1),
                          {Valuation::PolyJump(0.2), Valuation::Linear({0.5})})});
  out.push_back(
      {"threshold-pair",
       Instance(Mechanism::Standard(2, 2),
                {Valuation::ThresholdLow(2, 0.5, 0.5 / std::sqrt(2.0)),
                 Valuation::ThresholdHigh(2, 0.5, 0.5)})});
  out.push_back(
      {"linear-concave",
       Instance(Mechanism::Standard(2, 2),
                {Valuation::Linear({0.4, 0.2}),
                 Valuation::AdditiveConcave(
                     {ConcaveCurve::FromSegments({0.4, 0.6}, {0.5, 0.1}),
                      ConcaveCurve::FromSegments({0.5, 0.5}, {0.6, 0.2})})})});
  out.push_back(
      {"coordinate-linear",
       Instance(Mechanism::Standard(2, 2),
                {Valuation::ScaledCoordinate(2, 0, 0.5),
                 Valuation::Linear({0.3, 0.3})})});
  return out;
}

std::vector<NamedValuation> BuildValuationSamples() {
  const ConcaveCurve bent({0.0, 0.3, 1.0}, {0.0, 0.6, 0.9});
  const ConcaveCurve flat({0.0, 0.5, 1.0}, {0.0, 1.0, 1.0});
  return {
      {"linear", Valuation::Linear({1.0, 0.5, 2.0})},
      {"additive-concave",
       Valuation::AdditiveConcave({bent, flat, ConcaveCurve::Linear(0.7)})},
      // min_j (x_j + y_j) can exceed min_j x_j + min_j y_j.
      {"min-coordinate", Valuation::MinCoordinate(3, 1.0), false},
      {"scaled-coordinate", Valuation::ScaledCoordinate(3, 1, 0.5)},
      {"threshold-low", Valuation::ThresholdLow(3, 0.5, 0.2)},
      {"threshold-high", Valuation::ThresholdHigh(3, 0.5, 1.0)},
      {"poly-jump", Valuation::PolyJump(0.01)},
      {"budget-truncated", Truncate(Valuation::Linear({1.0, 1.0}), 0.8)},
      {"budget-truncated-concave",
       Truncate(Valuation::AdditiveConcave({bent}), 0.5)},
      {"geometric-mean", Valuation::GeometricMean(), false},
  };
}

}  // namespace proplab
