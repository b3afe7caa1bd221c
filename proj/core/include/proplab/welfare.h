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

#ifndef PROPLAB_WELFARE_H_
#define PROPLAB_WELFARE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "proplab/mechanism.h"
#include "proplab/profiles.h"

namespace proplab {

enum class WelfareMode { kSocial, kEffective };

// SW(x) = sum_i v_i(x_i). Throws std::invalid_argument on an infeasible
// allocation.
double SocialWelfare(const Instance& instance, const Allocation& allocation);

// EW(x) = sum_i min{v_i(x_i), c_i}. Requires budgets.
double EffectiveWelfare(const Instance& instance, const Allocation& allocation);

struct WeightedAllocation {
  Allocation allocation;
  double probability = 0.0;
};

// E[SW] of the allocations induced by a bid distribution.
double ExpectedSocialWelfare(const Instance& instance,
                             const CorrelatedProfile& dist);

// sum_i min{E[v_i(x_i)], c_i}: the cap is applied after the expectation.
double ExpectedEffectiveWelfare(const Instance& instance,
                                std::span<const WeightedAllocation> dist);
double ExpectedEffectiveWelfare(const Instance& instance,
                                const CorrelatedProfile& dist);

// Per-agent E[v_i(x_i)] under a bid distribution.
std::vector<double> ExpectedValues(const Instance& instance,
                                   const CorrelatedProfile& dist);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

// Monte Carlo E[SW] of a mixed profile (samplers allowed).
Estimate MixedWelfareMonteCarlo(const Instance& instance,
                                const MixedProfile& profile,
                                std::uint64_t samples, std::uint64_t seed);

struct WelfareOptions {
  int resolution = 20;  // grid {0, 1/K, ..., 1}
  WelfareMode mode = WelfareMode::kSocial;
  // Use separable/symmetric structure; false forces the plain grid.
  bool exploit_structure = true;
  std::uint64_t max_enumeration = 100'000'000;
};

struct WelfareReport {
  double value = 0.0;
  Allocation allocation;
  int resolution = 0;
  WelfareMode mode = WelfareMode::kSocial;
  // "separable-concave", "additive-grid", "symmetric-grid", "grid" or
  // "polyhedral-grid".
  std::string method;
  std::uint64_t enumerated = 0;
};

// Best allocation found by the oracle. Standard mode enumerates per-resource
// shares on the K-grid simplex, reduced over interchangeable resources;
// additive concave piecewise-linear instances are solved exactly by greedy
// slope filling. Polyhedral mode enumerates the first n-1 agents on the grid
// and gives the last agent the largest feasible share. Throws
// std::length_error when the enumeration exceeds max_enumeration.
WelfareReport OptimalWelfare(const Instance& instance,
                             const WelfareOptions& options = {});

}  // namespace proplab

#endif  // PROPLAB_WELFARE_H_
