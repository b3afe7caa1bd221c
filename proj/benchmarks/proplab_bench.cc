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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "proplab/constructions.h"
#include "proplab/equilibrium.h"
#include "proplab/learning.h"
#include "proplab/mechanism.h"
#include "proplab/welfare.h"

namespace proplab {
namespace {

BidProfile RandomBids(int agents, int columns, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix bids(agents, columns);
  for (int i = 0; i < agents; ++i) {
    for (int j = 0; j < columns; ++j) bids(i, j) = unit(rng);
  }
  return BidProfile(std::move(bids));
}

void BM_StandardAllocate(benchmark::State& state) {
  const int agents = static_cast<int>(state.range(0));
  const int resources = static_cast<int>(state.range(1));
  const Mechanism mechanism = Mechanism::Standard(agents, resources);
  const BidProfile bids = RandomBids(agents, resources, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mechanism.Allocate(bids));
  }
  state.SetItemsProcessed(state.iterations() * agents * resources);
}
BENCHMARK(BM_StandardAllocate)->Args({2, 1})->Args({8, 4})->Args({32, 16});

void BM_PolyhedralAllocate(benchmark::State& state) {
  const PolyhedralGapBuild build = BuildPolyhedralGap(0.01);
  const Mechanism& mechanism = build.instance.mechanism();
  const BidProfile bids =
      RandomBids(mechanism.num_agents(), mechanism.num_columns(), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mechanism.Allocate(bids));
  }
}
BENCHMARK(BM_PolyhedralAllocate);

void BM_BestResponseConcave(benchmark::State& state) {
  const std::vector<NamedInstance> suite = BuildConcaveSuite(11, 1);
  const Instance& instance = suite.front().instance;
  const BidProfile bids =
      RandomBids(instance.num_agents(), instance.num_columns(), 3);
  SearchConfig config;
  config.axes = {GridAxis{0.0, 4.0, 1e-3}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(BestResponse(instance, 0, bids, config));
  }
}
BENCHMARK(BM_BestResponseConcave);

void BM_BestResponseJointGrid(benchmark::State& state) {
  const Instance instance(
      Mechanism::Standard(2, 2),
      {Valuation::MinCoordinate(2, 1.0), Valuation::GeometricMean()});
  const BidProfile bids = RandomBids(2, 2, 4);
  SearchConfig config;
  config.axes = {GridAxis{0.0, 1.0, 0.01}};
  config.mode = SearchMode::kJoint;
  for (auto _ : state) {
    benchmark::DoNotOptimize(BestResponse(instance, 0, bids, config));
  }
}
BENCHMARK(BM_BestResponseJointGrid);

void BM_HedgeRounds(benchmark::State& state) {
  const std::vector<NamedInstance> suite = BuildSubadditiveSuite();
  const Instance& instance = suite.front().instance;
  std::vector<ActionGrid> grids;
  const std::vector<double> full(instance.num_columns(), 1.0);
  for (int i = 0; i < instance.num_agents(); ++i) {
    grids.push_back(ActionGrid::Product(instance.num_columns(),
                                        GridAxis{0.0, 2.0, 0.01},
                                        instance.valuation(i)(full)));
  }
  HedgeOptions options;
  options.rounds = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(HedgeLearn(instance, grids, options));
  }
  state.SetItemsProcessed(state.iterations() * options.rounds);
}
BENCHMARK(BM_HedgeRounds)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_OptimalWelfareGrid(benchmark::State& state) {
  const Instance instance(Mechanism::Standard(3, 2),
                          {Valuation::MinCoordinate(2, 1.0),
                           Valuation::GeometricMean(),
                           Valuation::ThresholdLow(2, 0.3, 0.5)});
  WelfareOptions options;
  options.resolution = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(OptimalWelfare(instance, options));
  }
}
BENCHMARK(BM_OptimalWelfareGrid)->Arg(10)->Arg(20)->Unit(
    benchmark::kMillisecond);

void BM_OptimalWelfareSeparable(benchmark::State& state) {
  const std::vector<NamedInstance> suite = BuildConcaveSuite(11, 1);
  const Instance& instance = suite.front().instance;
  WelfareOptions options;
  options.resolution = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(OptimalWelfare(instance, options));
  }
}
BENCHMARK(BM_OptimalWelfareSeparable);

}  // namespace
}  // namespace proplab

BENCHMARK_MAIN();
