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

#include "proplab/welfare.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace proplab {
namespace {

void RequireFeasible(const Instance& instance, const Allocation& allocation) {
  if (!instance.mechanism().IsFeasible(allocation)) {
    throw std::invalid_argument("allocation is infeasible");
  }
}

void RequireBudgets(const Instance& instance) {
  if (!instance.has_budgets()) {
    throw std::invalid_argument("effective welfare needs budgets");
  }
}

// Objective valuations: capped by the budgets in effective mode.
std::vector<Valuation> ObjectiveValuations(const Instance& instance,
                                           WelfareMode mode) {
  if (mode == WelfareMode::kSocial) return instance.valuations();
  RequireBudgets(instance);
  std::vector<Valuation> out;
  for (int i = 0; i < instance.num_agents(); ++i) {
    out.push_back(Truncate(instance.valuation(i), instance.budget(i)));
  }
  return out;
}

double Objective(const std::vector<Valuation>& values, const Matrix& shares) {
  double total = 0.0;
  for (int i = 0; i < shares.rows(); ++i) {
    total += values[i].EvalUnchecked(shares.row(i));
  }
  return total;
}

// Saturating product against the enumeration budget.
std::uint64_t MulCapped(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
  if (a == 0 || b == 0) return 0;
  if (a > cap / b) return cap + 1;
  return a * b;
}

// C(n + k - 1, k): multisets of size k from n types.
std::uint64_t MultisetCount(std::uint64_t types, std::uint64_t size,
                            std::uint64_t cap) {
  // Multiply then divide keeps every partial result an exact binomial.
  long double acc = 1.0L;
  for (std::uint64_t r = 1; r <= size; ++r) {
    acc = acc * static_cast<long double>(types - 1 + r) / r;
    if (acc > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::uint64_t>(std::llround(acc));
}

// All vectors of n nonnegative integers summing to K, lexicographic.
std::vector<std::vector<int>> Compositions(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(n, 0);
  auto rec = [&](auto&& self, int agent, int remaining) -> void {
    if (agent == n - 1) {
      current[agent] = remaining;
      out.push_back(current);
      return;
    }
    for (int units = 0; units <= remaining; ++units) {
      current[agent] = units;
      self(self, agent + 1, remaining - units);
    }
  };
  rec(rec, 0, k);
  return out;
}

WelfareReport SeparableConcave(
    const std::vector<std::vector<ConcaveCurve>>& curves,
    const std::vector<Valuation>& values, int n, int m) {
  struct Segment {
    double slope;
    double length;
    int agent;
    int index;
  };
  WelfareReport report;
  report.allocation.shares = Matrix(n, m);
  for (int j = 0; j < m; ++j) {
    std::vector<Segment> segments;
    for (int i = 0; i < n; ++i) {
      const ConcaveCurve& c = curves[i][j];
      for (int k = 0; k < c.num_segments(); ++k) {
        if (c.slope(k) > 0.0) {
          segments.push_back({c.slope(k), c.xs()[k + 1] - c.xs()[k], i, k});
        }
      }
    }
    std::stable_sort(segments.begin(), segments.end(),
                     [](const Segment& a, const Segment& b) {
                       if (a.slope != b.slope) return a.slope > b.slope;
                       if (a.agent != b.agent) return a.agent < b.agent;
                       return a.index < b.index;
                     });
    double remaining = 1.0;
    for (const Segment& s : segments) {
      if (remaining <= 0.0) break;
      const double take = std::min(s.length, remaining);
      report.allocation.shares(s.agent, j) += take;
      remaining -= take;
    }
    for (int i = 0; i < n; ++i) {
      report.allocation.shares(i, j) =
          std::min(1.0, report.allocation.shares(i, j));
    }
  }
  report.value = Objective(values, report.allocation.shares);
  report.method = "separable-concave";
  report.enumerated = 0;
  return report;
}

WelfareReport AdditiveGrid(const std::vector<Valuation>& values, int n, int m,
                           const WelfareOptions& options) {
  const int K = options.resolution;
  const auto comps = Compositions(n, K);
  WelfareReport report;
  report.allocation.shares = Matrix(n, m);
  std::vector<double> probe(m, 0.0);
  for (int j = 0; j < m; ++j) {
    double best = -INFINITY;
    const std::vector<int>* best_comp = nullptr;
    for (const auto& comp : comps) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        probe[j] = static_cast<double>(comp[i]) / K;
        total += values[i].EvalUnchecked(probe);
      }
      probe[j] = 0.0;
      if (total > best) {
        best = total;
        best_comp = &comp;
      }
      ++report.enumerated;
    }
    for (int i = 0; i < n; ++i) {
      report.allocation.shares(i, j) = static_cast<double>((*best_comp)[i]) / K;
    }
  }
  report.value = Objective(values, report.allocation.shares);
  report.method = "additive-grid";
  return report;
}

// Grid over per-resource share vectors, treating resources with identical
// symmetry labels (for every agent) as one class; within a class only
// nondecreasing assignments of share types are visited.
WelfareReport SymmetricGrid(const std::vector<Valuation>& values, int n, int m,
                            const WelfareOptions& options) {
  const int K = options.resolution;
  const auto comps = Compositions(n, K);
  const std::uint64_t types = comps.size();

  std::vector<std::vector<int>> classes;
  if (options.exploit_structure) {
    std::vector<std::vector<std::int64_t>> labels;
    for (const auto& v : values) labels.push_back(v.SymmetryLabels());
    std::map<std::vector<std::int64_t>, int> class_of;
    for (int j = 0; j < m; ++j) {
      std::vector<std::int64_t> key(n);
      for (int i = 0; i < n; ++i) key[i] = labels[i][j];
      auto [it, inserted] =
          class_of.emplace(key, static_cast<int>(classes.size()));
      if (inserted) classes.emplace_back();
      classes[it->second].push_back(j);
    }
  } else {
    for (int j = 0; j < m; ++j) classes.push_back({j});
  }

  std::uint64_t total = 1;
  for (const auto& c : classes) {
    total = MulCapped(total, MultisetCount(types, c.size(), options.max_enumeration),
                      options.max_enumeration);
  }
  if (total > options.max_enumeration) {
    throw std::length_error(
        "OptimalWelfare: grid enumeration exceeds the configured budget");
  }

  // state[c][r]: composition index of the r-th resource of class c.
  std::vector<std::vector<std::size_t>> state;
  for (const auto& c : classes) state.emplace_back(c.size(), 0);
  Matrix shares(n, m);
  auto write_class = [&](std::size_t c) {
    for (std::size_t r = 0; r < classes[c].size(); ++r) {
      const auto& comp = comps[state[c][r]];
      for (int i = 0; i < n; ++i) {
        shares(i, classes[c][r]) = static_cast<double>(comp[i]) / K;
      }
    }
  };
  for (std::size_t c = 0; c < classes.size(); ++c) write_class(c);

  WelfareReport report;
  double best = -INFINITY;
  while (true) {
    const double value = Objective(values, shares);
    ++report.enumerated;
    if (value > best) {
      best = value;
      report.allocation.shares = shares;
    }
    // Advance the odometer, last class fastest.
    int c = static_cast<int>(classes.size()) - 1;
    for (; c >= 0; --c) {
      auto& s = state[c];
      int r = static_cast<int>(s.size()) - 1;
      while (r >= 0 && s[r] == types - 1) --r;
      if (r >= 0) {
        const std::size_t v = s[r] + 1;
        for (std::size_t k = r; k < s.size(); ++k) s[k] = v;
        write_class(c);
        break;
      }
      std::fill(s.begin(), s.end(), 0);
      write_class(c);
    }
    if (c < 0) break;
  }
  report.value = Objective(values, report.allocation.shares);
  report.method = options.exploit_structure ? "symmetric-grid" : "grid";
  return report;
}

WelfareReport PolyhedralGrid(const Instance& instance,
                             const std::vector<Valuation>& values,
                             const WelfareOptions& options) {
  const Mechanism& mech = instance.mechanism();
  const Matrix& A = mech.constraints();
  const int n = mech.num_agents();
  const int rows = mech.num_columns();
  const int K = options.resolution;
  std::uint64_t total = 1;
  for (int i = 0; i + 1 < n; ++i) {
    total = MulCapped(total, K + 1, options.max_enumeration);
  }
  if (total > options.max_enumeration) {
    throw std::length_error(
        "OptimalWelfare: grid enumeration exceeds the configured budget");
  }
  Matrix shares(n, 1);
  std::vector<int> units(std::max(0, n - 1), 0);
  WelfareReport report;
  double best = -INFINITY;
  while (true) {
    bool feasible = true;
    double last = 1.0;
    for (int j = 0; j < rows && feasible; ++j) {
      double load = 0.0;
      for (int i = 0; i + 1 < n; ++i) {
        load += A(j, i) * static_cast<double>(units[i]) / K;
      }
      if (load > 1.0 + kFeasibilityTol) feasible = false;
      const double a_last = A(j, n - 1);
      if (a_last > 0.0) last = std::min(last, std::max(0.0, 1.0 - load) / a_last);
    }
    if (feasible) {
      for (int i = 0; i + 1 < n; ++i) {
        shares(i, 0) = static_cast<double>(units[i]) / K;
      }
      shares(n - 1, 0) = std::max(0.0, last);
      const double value = Objective(values, shares);
      ++report.enumerated;
      if (value > best) {
        best = value;
        report.allocation.shares = shares;
      }
    }
    int i = n - 2;
    while (i >= 0 && ++units[i] > K) {
      units[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  report.value = Objective(values, report.allocation.shares);
  report.method = "polyhedral-grid";
  return report;
}

}  // namespace

double SocialWelfare(const Instance& instance, const Allocation& allocation) {
  RequireFeasible(instance, allocation);
  double total = 0.0;
  for (int i = 0; i < instance.num_agents(); ++i) {
    total += instance.valuation(i)(allocation.row(i));
  }
  return total;
}

double EffectiveWelfare(const Instance& instance, const Allocation& allocation) {
  RequireBudgets(instance);
  RequireFeasible(instance, allocation);
  double total = 0.0;
  for (int i = 0; i < instance.num_agents(); ++i) {
    total += std::min(instance.valuation(i)(allocation.row(i)),
                      instance.budget(i));
  }
  return total;
}

std::vector<double> ExpectedValues(const Instance& instance,
                                   const CorrelatedProfile& dist) {
  std::vector<double> values(instance.num_agents(), 0.0);
  for (const auto& w : dist.support()) {
    const Allocation x = instance.mechanism().Allocate(w.bids);
    for (int i = 0; i < instance.num_agents(); ++i) {
      values[i] += w.probability * instance.valuation(i).EvalUnchecked(x.row(i));
    }
  }
  return values;
}

double ExpectedSocialWelfare(const Instance& instance,
                             const CorrelatedProfile& dist) {
  double total = 0.0;
  for (double v : ExpectedValues(instance, dist)) total += v;
  return total;
}

double ExpectedEffectiveWelfare(const Instance& instance,
                                std::span<const WeightedAllocation> dist) {
  RequireBudgets(instance);
  std::vector<double> values(instance.num_agents(), 0.0);
  for (const auto& w : dist) {
    RequireFeasible(instance, w.allocation);
    for (int i = 0; i < instance.num_agents(); ++i) {
      values[i] += w.probability * instance.valuation(i)(w.allocation.row(i));
    }
  }
  double total = 0.0;
  for (int i = 0; i < instance.num_agents(); ++i) {
    total += std::min(values[i], instance.budget(i));
  }
  return total;
}

double ExpectedEffectiveWelfare(const Instance& instance,
                                const CorrelatedProfile& dist) {
  RequireBudgets(instance);
  const std::vector<double> values = ExpectedValues(instance, dist);
  double total = 0.0;
  for (int i = 0; i < instance.num_agents(); ++i) {
    total += std::min(values[i], instance.budget(i));
  }
  return total;
}

Estimate MixedWelfareMonteCarlo(const Instance& instance,
                                const MixedProfile& profile,
                                std::uint64_t samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  Rng rng(seed);
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const BidProfile draw = SampleProfile(profile, rng);
    const Allocation alloc = instance.mechanism().Allocate(draw);
    double w = 0.0;
    for (int i = 0; i < instance.num_agents(); ++i) {
      w += instance.valuation(i).EvalUnchecked(alloc.row(i));
    }
    const double delta = w - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (w - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / samples), samples};
}

WelfareReport OptimalWelfare(const Instance& instance,
                             const WelfareOptions& options) {
  if (options.resolution < 1) {
    throw std::invalid_argument("OptimalWelfare: resolution must be >= 1");
  }
  const std::vector<Valuation> values =
      ObjectiveValuations(instance, options.mode);
  const int n = instance.num_agents();
  const int m = instance.num_columns();

  WelfareReport report;
  if (instance.mechanism().polyhedral()) {
    report = PolyhedralGrid(instance, values, options);
  } else {
    bool separable = options.exploit_structure;
    std::vector<std::vector<ConcaveCurve>> curves;
    for (const auto& v : values) {
      if (!separable) break;
      auto form = v.SeparableConcaveForm();
      if (!form) {
        separable = false;
      } else {
        curves.push_back(std::move(*form));
      }
    }
    const bool additive =
        options.exploit_structure &&
        std::all_of(values.begin(), values.end(),
                    [](const Valuation& v) { return v.IsAdditive(); });
    if (separable) {
      report = SeparableConcave(curves, values, n, m);
    } else if (additive && m > 1) {
      report = AdditiveGrid(values, n, m, options);
    } else {
      report = SymmetricGrid(values, n, m, options);
    }
  }
  report.resolution = options.resolution;
  report.mode = options.mode;
  return report;
}

}  // namespace proplab
