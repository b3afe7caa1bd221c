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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "proplab/constructions.h"
#include "proplab/valuation.h"

namespace proplab {
namespace {

TEST(ValuationTest, FamilyExamples) {
  EXPECT_DOUBLE_EQ(Valuation::MinCoordinate(4, 1.0)({1, 1, 1, 0.5}), 0.5);
  EXPECT_DOUBLE_EQ(
      Valuation::ThresholdHigh(3, 0.5, 1.0)({0.6, 0.6, 0.6}), 2.0);
  EXPECT_DOUBLE_EQ(Valuation::PolyJump(0.2)({0.5}), 1.1);
  EXPECT_DOUBLE_EQ(Valuation::PolyJump(0.2)({1.0}), 2.0);
  EXPECT_DOUBLE_EQ(Valuation::PolyJump(0.2)({0.0}), 0.0);
}

TEST(ValuationTest, ThresholdLevels) {
  const Valuation low = Valuation::ThresholdLow(2, 0.5, 0.3);
  EXPECT_EQ(low({0.0, 0.0}), 0.0);
  EXPECT_EQ(low({0.1, 0.2}), 0.3);
  EXPECT_EQ(low({0.5, 0.0}), 0.6);
  const Valuation high = Valuation::ThresholdHigh(2, 0.5, 1.0);
  EXPECT_EQ(high({0.0, 0.0}), 0.0);
  EXPECT_EQ(high({0.7, 0.2}), 1.0);
  EXPECT_EQ(high({0.5, 0.5}), 2.0);
}

TEST(ValuationTest, RejectsOutOfRange) {
  const Valuation v = Valuation::Linear({1.0, 1.0});
  EXPECT_THROW(v({1.5, 0.0}), std::invalid_argument);
  EXPECT_THROW(v({-0.1, 0.0}), std::invalid_argument);
  EXPECT_THROW(v({0.5}), std::invalid_argument);
}

TEST(ConcaveCurveTest, RejectsConvexSlopes) {
  EXPECT_THROW(ConcaveCurve({0.0, 0.5, 1.0}, {0.0, 0.1, 1.0}),
               std::invalid_argument);
  const ConcaveCurve c({0.0, 0.5, 1.0}, {0.0, 1.0, 1.2});
  EXPECT_DOUBLE_EQ(c(0.25), 0.5);
  EXPECT_DOUBLE_EQ(c(0.75), 1.1);
}

TEST(TruncateTest, Examples) {
  EXPECT_DOUBLE_EQ(Truncate(Valuation::Linear({1.0}), 0.4)({1.0}), 0.4);
  const Valuation zero = Truncate(Valuation::Linear({3.0, 1.0}), 0.0);
  EXPECT_EQ(zero({0.3, 0.9}), 0.0);
  EXPECT_EQ(zero({1.0, 1.0}), 0.0);
  EXPECT_DOUBLE_EQ(Truncate(Valuation::MinCoordinate(2, 1.0), 0.3)({0.2, 0.9}),
                   0.2);
}

TEST(TruncateTest, IdempotentAtSameCap) {
  const Valuation v = Valuation::Linear({1.0, 2.0});
  const Valuation once = Truncate(v, 0.7);
  const Valuation twice = Truncate(once, 0.7);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 10'000; ++k) {
    const double a = unit(rng), b = unit(rng);
    ASSERT_EQ(once({a, b}), twice({a, b}));
  }
}

TEST(CheckSubadditiveTest, ConcaveAdditiveHolds) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> lengths = {0.3, 0.3, 0.4};
    std::vector<double> slopes = {unit(rng), unit(rng), unit(rng)};
    std::sort(slopes.rbegin(), slopes.rend());
    const Valuation v = Valuation::AdditiveConcave(
        {ConcaveCurve::FromSegments(lengths, slopes),
         ConcaveCurve::Linear(unit(rng))});
    EXPECT_TRUE(CheckSubadditive(v, 10'000, trial).holds());
  }
}

TEST(CheckSubadditiveTest, GeometricMeanWitness) {
  const PropertyReport r =
      CheckSubadditive(Valuation::GeometricMean(), 10'000, 1);
  ASSERT_FALSE(r.holds());
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->first, (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(r.witness->second, (std::vector<double>{0.0, 1.0}));
  EXPECT_DOUBLE_EQ(r.violation, 1.0);
}

// min_j x_j is superadditive: x = e_1 and y = 1 - e_1 give min(x+y) = 1
// while min x = min y = 0.
TEST(CheckSubadditiveTest, MinCoordinateIsNotSubadditive) {
  EXPECT_TRUE(CheckSubadditive(Valuation::MinCoordinate(1, 1.0), 10'000, 1)
                  .holds());
  for (int dim : {2, 3, 4}) {
    const PropertyReport r =
        CheckSubadditive(Valuation::MinCoordinate(dim, 1.0), 10'000, 1);
    ASSERT_FALSE(r.holds());
    const Valuation v = Valuation::MinCoordinate(dim, 1.0);
    std::vector<double> sum(dim);
    for (int j = 0; j < dim; ++j) {
      sum[j] = r.witness->first[j] + r.witness->second[j];
    }
    EXPECT_GT(v(sum), v(r.witness->first) + v(r.witness->second) + 1e-9);
  }
}

TEST(CheckMonotoneTest, BrokenFixtureIsCaught) {
  const Valuation broken = Valuation::Custom(
      "negated", 1, [](std::span<const double> x) { return 1.0 - x[0]; });
  const PropertyReport r = CheckMonotone(broken, 1000, 2);
  ASSERT_FALSE(r.holds());
  ASSERT_TRUE(r.witness.has_value());
  const double a = r.witness->first[0], b = r.witness->second[0];
  EXPECT_LE(a, b);
  EXPECT_GT(broken({a}), broken({b}));
  EXPECT_TRUE(CheckMonotone(Valuation::Linear({1.0, 2.0}), 10'000, 2).holds());
  EXPECT_TRUE(
      CheckMonotone(Valuation::ThresholdLow(2, 0.5, 1.0), 10'000, 2).holds());
}

TEST(PropertySuiteTest, ShippedFamilies) {
  for (const auto& named : BuildValuationSamples()) {
    SCOPED_TRACE(named.id);
    EXPECT_EQ(CheckSubadditive(named.valuation, 10'000, 5).holds(),
              named.subadditive);
    EXPECT_TRUE(CheckMonotone(named.valuation, 10'000, 5).holds());
    EXPECT_TRUE(CheckNormalized(named.valuation, 10'000, 5).holds());
    const std::vector<double> zero(named.valuation.dim(), 0.0);
    EXPECT_EQ(named.valuation(zero), 0.0);
  }
}

TEST(PropertySuiteTest, ViolationWitnessesReevaluate) {
  const Valuation v = Valuation::Custom(
      "bump", 2, [](std::span<const double> x) {
        return x[0] > 0.3 && x[1] > 0.3 ? 5.0 : 0.1 * (x[0] + x[1]);
      });
  const PropertyReport r = CheckSubadditive(v, 10'000, 3);
  ASSERT_FALSE(r.holds());
  const auto& [x, y] = *r.witness;
  EXPECT_GT(v({x[0] + y[0], x[1] + y[1]}), v(x) + v(y) + r.tolerance);
}

}  // namespace
}  // namespace proplab
