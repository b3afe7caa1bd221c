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

#include <algorithm>
#include <cmath>

#include "gtest/gtest.h"
#include "proplab/constructions.h"
#include "proplab/welfare.h"

namespace proplab {
namespace {

TEST(MinCoordinateGapTest, FourResources) {
  const MinCoordinateBuild b = BuildMinCoordinateGap(4);
  const MinCoordinateGap& c = b.construction;
  EXPECT_NEAR(c.delta, 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(c.beta, 1.0 / 18.0, 1e-15);
  EXPECT_NEAR(c.equilibrium_welfare, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(c.ratio(), 1.5, 1e-12);
  EXPECT_FALSE(c.degenerate);
  EXPECT_EQ(b.game.num_types(0), 1);
  EXPECT_EQ(b.game.num_types(1), 4);
}

TEST(MinCoordinateGapTest, OneResourceDegenerates) {
  const MinCoordinateGap c = BuildMinCoordinateGap(1).construction;
  EXPECT_DOUBLE_EQ(c.delta, 0.25);
  EXPECT_NEAR(c.ratio(), 1.0, 1e-12);
  EXPECT_TRUE(c.degenerate);
}

TEST(MinCoordinateGapTest, RatioGrowsWithResources) {
  const MinCoordinateGap c = BuildMinCoordinateGap(64).construction;
  EXPECT_NEAR(c.ratio(), 4.5, 1e-12);
  EXPECT_GE(c.ratio(), c.lower_bound());
  EXPECT_DOUBLE_EQ(c.lower_bound(), 4.0);
  for (int m = 1; m <= 100; ++m) {
    const MinCoordinateGap g = BuildMinCoordinateGap(m).construction;
    EXPECT_GT(g.beta, 0.0);
    EXPECT_GT(g.delta, 0.0);
    EXPECT_LE(g.delta, 0.25);
    EXPECT_NEAR(g.ratio(), (std::sqrt(m) + 1.0) / 2.0, 1e-12);
  }
}

TEST(MinCoordinateGapTest, ClosedFormMatchesEnumerationAndMonteCarlo) {
  for (int m : {4, 16}) {
    const MinCoordinateBuild b = BuildMinCoordinateGap(m);
    const double exact = BayesianExpectedWelfare(b.game, b.strategy);
    EXPECT_NEAR(exact, b.construction.equilibrium_welfare, 1e-12);
    const Estimate mc =
        BayesianWelfareMonteCarlo(b.game, b.strategy, 100'000, 1);
    EXPECT_NEAR(mc.mean, exact, std::max(3.0 * mc.std_error, 1e-12));
  }
}

TEST(ScaleFreeTest, HundredResources) {
  const ScaleFreeGap c = BuildScaleFree(100, 1.0).construction;
  EXPECT_NEAR(c.v, 0.1, 1e-15);
  EXPECT_NEAR(c.cap, 0.01, 1e-15);
  EXPECT_NEAR(c.atom(), 0.9, 1e-15);
  EXPECT_NEAR(c.ratio_bound(), 2.2 / 1.3, 1e-12);
  EXPECT_NEAR(c.optimal_welfare(), 2.2, 1e-12);
  for (double y : {1e-6, 0.001, 0.005, 0.01}) {
    EXPECT_NEAR(c.single_bid_utility(y), 0.19, 1e-12);
  }
  EXPECT_LE(c.expected_welfare(), c.welfare_upper_bound());
}

TEST(ScaleFreeTest, RatioBoundIncreasesTowardTwo) {
  double previous = 0.0;
  for (int m : {25, 100, 400, 2500}) {
    const double r = BuildScaleFree(m, 1.0).construction.ratio_bound();
    EXPECT_GT(r, previous);
    EXPECT_LT(r, 2.0);
    previous = r;
  }
  EXPECT_GT(BuildScaleFree(1'000'000, 1.0).construction.ratio_bound(), 1.99);
}

TEST(ScaleFreeTest, CdfsAreValid) {
  for (int m : {4, 100, 400}) {
    const ScaleFreeGap c = BuildScaleFree(m, 2.0).construction;
    EXPECT_DOUBLE_EQ(c.G(0.0), 0.0);
    EXPECT_NEAR(c.G(c.cap), 1.0, 1e-12);
    EXPECT_NEAR(c.F(c.cap), 1.0, 1e-12);
    EXPECT_NEAR(c.F(0.0), 1.0 - 1.0 / std::sqrt(m), 1e-12);
    double f = -1.0, g = -1.0;
    for (int k = 0; k <= 1000; ++k) {
      const double z = c.cap * k / 1000.0;
      EXPECT_GE(c.F(z), f);
      EXPECT_GE(c.G(z), g);
      f = c.F(z);
      g = c.G(z);
    }
  }
}

double KsDistance(std::vector<double> draws,
                  const std::function<double(double)>& cdf) {
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  double d = 0.0;
  for (std::size_t k = 0; k < draws.size(); ++k) {
    // Upper and lower empirical CDF at the draw; atoms repeat values.
    std::size_t hi = k;
    while (hi + 1 < draws.size() && draws[hi + 1] == draws[k]) ++hi;
    const double f = cdf(draws[k]);
    d = std::max(d, std::abs((hi + 1) / n - f));
    d = std::max(d, std::abs(k / n - (draws[k] == 0.0 ? 0.0 : f)));
    k = hi;
  }
  return d;
}

TEST(ScaleFreeTest, SamplersMatchCdfs) {
  const ScaleFreeBuild b = BuildScaleFree(100, 1.0);
  const ScaleFreeGap& c = b.construction;
  Rng rng(12);
  std::vector<double> y, z;
  for (int k = 0; k < 100'000; ++k) {
    const BidVector low = b.profile[0].Sample(rng);
    int positive = 0;
    double bid = 0.0;
    for (double x : low) {
      if (x > 0) ++positive, bid = x;
    }
    ASSERT_LE(positive, 1);
    y.push_back(bid);
    const BidVector high = b.profile[1].Sample(rng);
    ASSERT_TRUE(std::all_of(high.begin(), high.end(),
                            [&](double x) { return x == high[0]; }));
    z.push_back(high[0]);
  }
  EXPECT_LE(KsDistance(y, [&](double t) { return c.G(t); }), 0.01);
  EXPECT_LE(KsDistance(z, [&](double t) { return c.F(t); }), 0.01);
}

TEST(ScaleFreeTest, MonteCarloWelfareMatchesClosedForm) {
  const ScaleFreeBuild b = BuildScaleFree(100, 1.0);
  const Estimate e = MixedWelfareMonteCarlo(b.instance, b.profile, 100'000, 4);
  EXPECT_NEAR(e.mean, b.construction.expected_welfare(),
              std::max(3.0 * e.std_error, 1e-12));
}

TEST(ScaleFreeTest, RejectsTooFewResources) {
  EXPECT_THROW(BuildScaleFree(1, 1.0), std::invalid_argument);
  EXPECT_THROW(BuildScaleFree(4, 0.0), std::invalid_argument);
}

TEST(PolyhedralGapTest, Examples) {
  const PolyhedralGapBuild b = BuildPolyhedralGap(0.2);
  EXPECT_NEAR(b.construction.equilibrium_welfare, 1.2, 1e-15);
  EXPECT_NEAR(b.construction.ratio(), 5.0 / 3.0, 1e-12);
  EXPECT_NEAR(SocialWelfare(b.instance, b.instance.mechanism().Allocate(b.profile)),
              b.construction.equilibrium_welfare, 1e-12);
  EXPECT_NEAR(BuildPolyhedralGap(0.01).construction.ratio(), 2.0 / 1.01, 1e-9);
  EXPECT_GT(BuildPolyhedralGap(1e-6).construction.ratio(), 1.99999);
  EXPECT_GT(b.profile(0, 0), 0.0);
  EXPECT_THROW(BuildPolyhedralGap(1.0), std::invalid_argument);
}

TEST(SuiteTest, BudgetSuiteDeterministicAndMixed) {
  const auto a = BuildBudgetSuite(7);
  const auto b = BuildBudgetSuite(7);
  ASSERT_EQ(a.size(), 50u);
  bool zero = false, slack = false, binding = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].id, b[k].id);
    EXPECT_EQ(*a[k].instance.budgets(), *b[k].instance.budgets());
    const Instance& inst = a[k].instance;
    for (int i = 0; i < inst.num_agents(); ++i) {
      const double c = inst.budget(i), top = inst.valuation(i).MaxValue();
      zero |= c == 0.0;
      slack |= c > top;
      binding |= c > 0.0 && c < top;
    }
  }
  EXPECT_TRUE(zero && slack && binding);
}

TEST(SuiteTest, ZeroBudgetAgentContributesNothing) {
  int seen = 0;
  for (const auto& named : BuildBudgetSuite(7)) {
    const Instance& inst = named.instance;
    const Allocation x = inst.mechanism().Allocate(
        BidProfile(Matrix(inst.num_agents(), inst.num_columns(), 0.1)));
    double others = 0.0;
    int broke = -1;
    for (int i = 0; i < inst.num_agents(); ++i) {
      if (inst.budget(i) == 0.0) {
        broke = i;
      } else {
        others += std::min(inst.valuation(i)(x.row(i)), inst.budget(i));
      }
    }
    if (broke < 0) continue;
    ++seen;
    EXPECT_DOUBLE_EQ(EffectiveWelfare(inst, x), others) << named.id;
  }
  EXPECT_GT(seen, 0);
}

TEST(SuiteTest, SlackBudgetsMatchSocialWelfare) {
  for (const auto& named : BuildConcaveSuite(11, 10)) {
    const Instance& base = named.instance;
    std::vector<double> rich(base.num_agents(), 1e6);
    const Instance inst(base.mechanism(), base.valuations(), rich);
    WelfareOptions social, effective;
    effective.mode = WelfareMode::kEffective;
    EXPECT_DOUBLE_EQ(OptimalWelfare(inst, social).value,
                     OptimalWelfare(inst, effective).value);
  }
}

TEST(SuiteTest, SuitesAreDeterministic) {
  const auto a = BuildConcaveSuite(11);
  const auto b = BuildConcaveSuite(11);
  ASSERT_EQ(a.size(), 50u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    const Allocation xa = a[k].instance.mechanism().Allocate(
        BidProfile(Matrix(a[k].instance.num_agents(), 1, 0.3)));
    for (int i = 0; i < a[k].instance.num_agents(); ++i) {
      EXPECT_EQ(a[k].instance.valuation(i)(xa.row(i)),
                b[k].instance.valuation(i)(xa.row(i)));
    }
  }
  const auto p = BuildPolyhedralSuite(13);
  ASSERT_EQ(p.size(), 50u);
  for (const auto& named : p) {
    EXPECT_LE(named.instance.num_agents(), 3);
    EXPECT_TRUE(named.instance.mechanism().polyhedral());
  }
  const auto g = BuildBudgetBayesianSuite(7);
  ASSERT_EQ(g.size(), 10u);
  for (const auto& named : g) {
    for (int i = 0; i < named.game.num_agents(); ++i) {
      EXPECT_GE(named.game.num_types(i), 2);
      EXPECT_LE(named.game.num_types(i), 4);
    }
  }
}

}  // namespace
}  // namespace proplab
