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
#include "proplab/mechanism.h"

namespace proplab {
namespace {

Instance LinearPair() {
  return Instance(Mechanism::Standard(2, 1),
                  {Valuation::Linear({1.0}), Valuation::Linear({1.0})});
}

TEST(AllocateTest, EqualBidsSplitEvenly) {
  const Allocation x = Mechanism::Standard(2, 1).Allocate({{1.0}, {1.0}});
  EXPECT_DOUBLE_EQ(x.shares(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(x.shares(1, 0), 0.5);
}

TEST(AllocateTest, ContestedResourceShares) {
  std::vector<double> a(4, 1.0 / 18.0), b(4, 0.0);
  b[2] = 1.0 / 9.0;
  const Allocation x =
      Mechanism::Standard(2, 4).Allocate(BidProfile(Matrix::FromRows({a, b})));
  EXPECT_NEAR(x.shares(0, 2), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(x.shares(1, 2), 2.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(x.shares(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(x.shares(1, 0), 0.0);
}

TEST(AllocateTest, ZeroColumnGoesToTieBreakAgent) {
  const Mechanism mech = Mechanism::Standard(2, 1, TieBreak::ToAgent(1));
  const Allocation x = mech.Allocate(BidProfile::Zeros(2, 1));
  EXPECT_EQ(x.shares(0, 0), 0.0);
  EXPECT_EQ(x.shares(1, 0), 1.0);
  const Allocation split =
      Mechanism::Standard(2, 1).Allocate(BidProfile::Zeros(2, 1));
  EXPECT_EQ(split.shares(0, 0), 0.5);
}

TEST(AllocateTest, RejectsBadInput) {
  const Mechanism mech = Mechanism::Standard(2, 1);
  EXPECT_THROW(mech.Allocate(BidProfile::Zeros(3, 1)), std::invalid_argument);
  EXPECT_THROW(BidProfile({{-1.0}, {1.0}}), std::invalid_argument);
  EXPECT_THROW(BidProfile({{NAN}, {1.0}}), std::invalid_argument);
  EXPECT_THROW(Mechanism::Standard(0, 1), std::invalid_argument);
}

TEST(AllocatePolyhedralTest, SharedRow) {
  const Mechanism mech = Mechanism::Polyhedral(Matrix{{1.0, 1.0}});
  const Allocation x = mech.Allocate({{0.05}, {0.05}});
  EXPECT_DOUBLE_EQ(x.shares(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(x.shares(1, 0), 0.5);
  EXPECT_TRUE(mech.IsFeasible(x));
}

TEST(AllocatePolyhedralTest, SingleAgentHalf) {
  const Mechanism mech = Mechanism::Polyhedral(Matrix{{2.0}});
  EXPECT_DOUBLE_EQ(mech.Allocate({{0.7}}).shares(0, 0), 0.5);
}

TEST(AllocatePolyhedralTest, SeparateRows) {
  const Mechanism mech = Mechanism::Polyhedral(Matrix{{1.0, 0.0}, {0.0, 1.0}});
  const Allocation x = mech.Allocate({{1.0, 0.0}, {0.0, 3.0}});
  EXPECT_DOUBLE_EQ(x.shares(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(x.shares(1, 0), 1.0);
}

TEST(AllocatePolyhedralTest, AgentWithoutConstraintIsRejected) {
  EXPECT_THROW(Mechanism::Polyhedral(Matrix{{1.0, 0.0}}),
               std::invalid_argument);
}

TEST(UtilityTest, BayesianMinInstanceAgentZero) {
  const MinCoordinateBuild b = BuildMinCoordinateGap(4);
  const double beta = b.construction.beta;
  const double delta = b.construction.delta;
  for (int j = 0; j < 4; ++j) {
    const Instance inst = b.game.Realize({0, j});
    Matrix bids(2, 4, 0.0);
    for (int k = 0; k < 4; ++k) bids(0, k) = beta;
    bids(1, j) = delta;
    EXPECT_NEAR(Utility(inst, 0, BidProfile(bids)), 1.0 / 9.0, 1e-15);
  }
}

TEST(UtilityTest, SingleLinearAgent) {
  const Instance inst(Mechanism::Standard(1, 1), {Valuation::Linear({1.0})});
  EXPECT_NEAR(Utility(inst, 0, {{0.3}}), 0.7, 1e-15);
}

TEST(UtilityTest, PolyhedralGapSecondAgent) {
  const PolyhedralGapBuild b = BuildPolyhedralGap(0.2);
  EXPECT_NEAR(Utility(b.instance, 1, b.profile), 0.05, 1e-15);
}

TEST(MechanismPropertyTest, ColumnSumsAndScaleInvariance) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> dims(1, 4);
  for (int trial = 0; trial < 10'000; ++trial) {
    const int n = dims(rng), m = dims(rng);
    Matrix bids(n, m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) bids(i, j) = unit(rng) < 0.2 ? 0.0 : unit(rng);
    }
    const Mechanism mech = Mechanism::Standard(n, m);
    const Allocation x = mech.Allocate(BidProfile(bids));
    ASSERT_TRUE(mech.IsFeasible(x));
    for (int j = 0; j < m; ++j) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += x.shares(i, j);
      ASSERT_NEAR(sum, 1.0, 1e-12);
    }
    const int col = trial % m;
    const double c = 0.01 + 10.0 * unit(rng);
    Matrix scaled = bids;
    for (int i = 0; i < n; ++i) scaled(i, col) *= c;
    const Allocation y = mech.Allocate(BidProfile(scaled));
    for (int i = 0; i < n; ++i) {
      ASSERT_NEAR(x.shares(i, col), y.shares(i, col), 1e-12);
    }
    const int agent = trial % n;
    Matrix raised = bids;
    raised(agent, col) += unit(rng);
    const Allocation z = mech.Allocate(BidProfile(raised));
    ASSERT_GE(z.shares(agent, col), x.shares(agent, col) - 1e-15);
  }
}

TEST(MechanismPropertyTest, PolyhedralFeasibility) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 10'000; ++trial) {
    const int rows = 1 + trial % 3, n = 1 + (trial / 3) % 3;
    Matrix a(rows, n);
    for (int i = 0; i < n; ++i) a(trial % rows, i) = 0.1 + unit(rng);
    for (int r = 0; r < rows; ++r) {
      for (int i = 0; i < n; ++i) {
        if (unit(rng) < 0.5) a(r, i) = 0.1 + unit(rng);
      }
    }
    Matrix bids(n, rows);
    for (int i = 0; i < n; ++i) {
      for (int r = 0; r < rows; ++r) bids(i, r) = unit(rng) < 0.2 ? 0.0 : unit(rng);
    }
    const Mechanism mech = Mechanism::Polyhedral(a);
    ASSERT_TRUE(mech.IsFeasible(mech.Allocate(BidProfile(bids))));
  }
}

TEST(MechanismPropertyTest, PaymentsAndUtilityReconstruction) {
  const Instance inst = LinearPair();
  const BidProfile bids{{0.3}, {0.2}};
  const std::vector<double> q = Payments(bids);
  EXPECT_EQ(q[0], 0.3);
  EXPECT_EQ(q[1], 0.2);
  const Allocation x = inst.mechanism().Allocate(bids);
  for (int i = 0; i < 2; ++i) {
    EXPECT_DOUBLE_EQ(Utility(inst, i, bids),
                     inst.valuation(i)(x.row(i)) - q[i]);
  }
}

TEST(MechanismPropertyTest, AllocationIsDeterministic) {
  const Mechanism mech = Mechanism::Standard(3, 2, TieBreak::ToAgent(2));
  const BidProfile bids{{0.0, 0.1}, {0.0, 0.2}, {0.0, 0.0}};
  EXPECT_EQ(mech.Allocate(bids).shares, mech.Allocate(bids).shares);
}

}  // namespace
}  // namespace proplab
