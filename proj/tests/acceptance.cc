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

// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exit status is 0 only when all of them pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "proplab/constructions.h"
#include "proplab/deviations.h"
#include "proplab/equilibrium.h"
#include "proplab/learning.h"
#include "proplab/valuation.h"
#include "proplab/welfare.h"

namespace proplab {
namespace {

// Tolerances as stated by the acceptance criteria.
constexpr double kGapEps = 1e-6;
constexpr double kClosedFormTol = 1e-9;
constexpr double kGapSeconds = 30.0;
constexpr double kScaleFreeEps = 0.01;
constexpr double kScaleFreeRatioSlack = 0.02;
constexpr double kScaleFreeSeconds = 60.0;
constexpr double kPolyEps = 1e-6;
constexpr double kPolySuiteSlack = 1e-3;
constexpr double kConcaveResidual = 1e-8;
constexpr double kConcaveSlack = 1e-3;
constexpr double kRegretPerRound = 0.01;
constexpr double kCceWelfareSlack = 0.05;
constexpr double kLearningSeconds = 300.0;
constexpr double kBudgetSlack = 0.05;
constexpr double kDeviationSlack = 0.02;
constexpr std::uint64_t kDeviationDraws = 10'000;
constexpr std::uint64_t kFeasibilityDraws = 100'000;
constexpr int kPropertySamples = 10'000;
// Floor for "within 3 standard errors" when the estimator has no variance.
constexpr double kSeFloor = 1e-12;

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void Report(int criterion, bool pass, const std::string& what,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s | %s\n", pass ? "PASS" : "FAIL",
              criterion, what.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

std::vector<ActionGrid> HedgeGrids(const Instance& inst) {
  std::vector<ActionGrid> grids;
  for (int i = 0; i < inst.num_agents(); ++i) {
    grids.push_back(ActionGrid::Product(
        inst.num_columns(), GridAxis{0.0, 2.0, 0.01},
        std::min(inst.valuation(i).MaxValue(), inst.budget(i))));
  }
  return grids;
}

struct LearnedPlay {
  std::string id;
  const Instance* instance;
  HedgeResult result;
};

void MinCoordinateGapCriterion() {
  bool pass = true;
  std::string detail;
  for (int m : {4, 16, 64}) {
    const auto start = Clock::now();
    const MinCoordinateBuild b = BuildMinCoordinateGap(m);
    const EquilibriumReport v = VerifyBayesianNe(
        b.game, b.strategy, MinCoordinateDeviationGrids(b.construction, 1e-4, 3),
        kGapEps);
    WelfareOptions oracle;
    oracle.resolution = 2;
    const double opt = BayesianOptimalWelfare(b.game, oracle);
    const double sw = BayesianExpectedWelfare(b.game, b.strategy);
    const double ratio = opt / sw;
    const double closed = (std::sqrt(m) + 1.0) / 2.0;
    const Estimate mc = BayesianWelfareMonteCarlo(b.game, b.strategy, 100'000, m);
    const double mc_ratio = opt / mc.mean;
    // Delta method: se(OPT / W) = OPT se(W) / W^2.
    const double mc_ratio_se = opt * mc.std_error / (mc.mean * mc.mean);
    const double secs = Seconds(start);
    const bool ok = v.eps <= kGapEps && std::abs(ratio - closed) <= kClosedFormTol &&
                    std::abs(mc_ratio - closed) <=
                        std::max(3.0 * mc_ratio_se, kSeFloor) &&
                    ratio >= b.construction.lower_bound() && secs < kGapSeconds;
    pass = pass && ok;
    detail += Format("m=%d eps=%.2g ratio=%.12g (closed %.12g, mc %.12g se %.2g, "
                     ">= %.3g) %.2fs; ",
                     m, v.eps, ratio, closed, mc_ratio, mc_ratio_se,
                     b.construction.lower_bound(), secs);
  }
  Report(1, pass, "Bayesian min-coordinate gap reaches (sqrt(m)+1)/2", detail);
}

void ScaleFreeCriterion() {
  const auto start = Clock::now();
  const ScaleFreeBuild b = BuildScaleFree(100, 1.0);
  const ScaleFreeGap& c = b.construction;
  const EquilibriumReport v =
      VerifyMixedNe(b.instance, b.profile, 100'000,
                    ScaleFreeDeviationGrids(c), 3, kScaleFreeEps);
  const Estimate sw = MixedWelfareMonteCarlo(b.instance, b.profile, 100'000, 3);
  WelfareOptions oracle;
  oracle.resolution = 2;
  const double opt = OptimalWelfare(b.instance, oracle).value;
  const double ci = 1.96 * sw.std_error;
  const double ratio = opt / sw.mean;
  const double secs = Seconds(start);
  bool trend = true;
  double previous = 0.0;
  std::string bounds;
  for (int m : {25, 100, 400, 2500}) {
    const double r = BuildScaleFree(m, 1.0).construction.ratio_bound();
    trend = trend && r > previous && r < 2.0;
    previous = r;
    bounds += Format("%.4f ", r);
  }
  const bool pass = v.eps <= kScaleFreeEps &&
                    sw.mean <= c.welfare_upper_bound() + ci &&
                    ratio >= c.ratio_bound() - kScaleFreeRatioSlack &&
                    secs < kScaleFreeSeconds && trend;
  Report(2, pass, "scale-free mixed equilibrium, m=100, V=1",
         Format("eps=%.4g (ci %.2g) E[SW]=%.5f <= %.4f+%.2g, OPT/SW=%.5f >= "
                "%.5f, %.1fs; bound trend %s",
                v.eps, v.ci_halfwidth, sw.mean, c.welfare_upper_bound(), ci,
                ratio, c.ratio_bound() - kScaleFreeRatioSlack, secs,
                bounds.c_str()));
}

void PolyhedralCriterion() {
  const PolyhedralGapBuild b = BuildPolyhedralGap(0.01);
  SearchConfig grid;
  grid.axes = {GridAxis{0.0, 1.0, 1e-5}};
  grid.allocation_step = 1e-5;
  const EquilibriumReport v = VerifyPureNe(b.instance, b.profile, {grid}, kPolyEps);
  const double sw =
      SocialWelfare(b.instance, b.instance.mechanism().Allocate(b.profile));
  const double opt = OptimalWelfare(b.instance).value;
  const double ratio = opt / sw;
  bool pass = v.eps <= kPolyEps && std::abs(ratio - 2.0 / 1.01) <= kClosedFormTol;

  int converged = 0;
  double worst = 0.0;
  SearchConfig br;
  br.axes = {GridAxis{0.0, 4.0, 1e-3}};
  BrDynamicsOptions options;
  options.max_rounds = 1000;
  options.tolerance = 1e-9;
  options.damping = 0.5;
  WelfareOptions oracle;
  oracle.resolution = 100;
  for (const auto& named : BuildPolyhedralSuite(13, 50)) {
    const Instance& inst = named.instance;
    const BrDynamicsResult r = BrDynamics(
        inst, BidProfile(Matrix(inst.num_agents(), inst.num_columns(), 0.1)),
        {br}, options);
    if (!r.converged) continue;
    ++converged;
    worst = std::max(worst,
                     OptimalWelfare(inst, oracle).value /
                         SocialWelfare(inst, inst.mechanism().Allocate(r.profile)));
  }
  pass = pass && converged > 0 && worst <= 2.0 + kPolySuiteSlack;
  Report(3, pass, "polyhedral pure equilibria: gap instance and random suite",
         Format("gap eps=%.2g ratio=%.12g (2/1.01=%.12g); suite %d/50 converged, "
                "worst OPT/SW=%.5f <= %.3f",
                v.eps, ratio, 2.0 / 1.01, converged, worst,
                2.0 + kPolySuiteSlack));
}

void ConcaveCriterion() {
  SearchConfig br;
  br.axes = {GridAxis{0.0, 4.0, 1e-3}};
  BrDynamicsOptions options;
  options.max_rounds = 2000;
  options.tolerance = 1e-10;
  options.damping = 0.5;
  int converged = 0;
  double worst = 0.0, residual = 0.0;
  for (const auto& named : BuildConcaveSuite(11, 50)) {
    const Instance& inst = named.instance;
    const BrDynamicsResult r = BrDynamics(
        inst, BidProfile::Zeros(inst.num_agents(), 1), {br}, options);
    converged += r.converged && r.residual <= kConcaveResidual;
    residual = std::max(residual, r.residual);
    worst = std::max(worst,
                     OptimalWelfare(inst).value /
                         SocialWelfare(inst, inst.mechanism().Allocate(r.profile)));
  }
  const bool pass = converged == 50 && worst <= 4.0 / 3.0 + kConcaveSlack;
  Report(4, pass, "concave single-resource pure equilibria within 4/3",
         Format("%d/50 converged (max residual %.2g), worst OPT/SW=%.6f <= %.6f",
                converged, residual, worst, 4.0 / 3.0 + kConcaveSlack));
}

std::vector<LearnedPlay> LearningCriterion(
    const std::vector<NamedInstance>& suite) {
  const auto start = Clock::now();
  std::vector<LearnedPlay> plays;
  bool pass = true;
  double worst_regret = 0.0, worst_gap = -1e9;
  for (const auto& named : suite) {
    HedgeOptions options;
    options.rounds = 100'000;
    options.seed = 5;
    HedgeResult r = HedgeLearn(named.instance, HedgeGrids(named.instance), options);
    for (int i = 0; i < named.instance.num_agents(); ++i) {
      worst_regret = std::max(worst_regret, r.RegretPerRound(i));
      pass = pass && r.RegretPerRound(i) <= kRegretPerRound;
    }
    const double sw = ExpectedSocialWelfare(named.instance, r.play);
    const double opt = OptimalWelfare(named.instance).value;
    worst_gap = std::max(worst_gap, opt / 2.0 - sw);
    pass = pass && sw >= opt / 2.0 - kCceWelfareSlack;
    plays.push_back({named.id, &named.instance, std::move(r)});
  }
  const double secs = Seconds(start);
  pass = pass && secs < kLearningSeconds;
  Report(5, pass, "no-regret play on the subadditive suite",
         Format("%zu instances, max regret/T=%.5f <= %.2f, max OPT/2-SW=%.4f <= "
                "%.2f, %.1fs < %.0fs",
                suite.size(), worst_regret, kRegretPerRound, worst_gap,
                kCceWelfareSlack, secs, kLearningSeconds));
  return plays;
}

std::vector<LearnedPlay> BudgetCriterion(
    const std::vector<NamedInstance>& suite) {
  std::vector<LearnedPlay> plays;
  double worst_ew = 0.0, worst_sw = 0.0, worst_regret = 0.0;
  WelfareOptions effective;
  effective.mode = WelfareMode::kEffective;
  for (const auto& named : suite) {
    HedgeOptions options;
    options.rounds = 50'000;
    options.seed = 5;
    HedgeResult r = HedgeLearn(named.instance, HedgeGrids(named.instance), options);
    for (int i = 0; i < named.instance.num_agents(); ++i) {
      worst_regret = std::max(worst_regret, r.RegretPerRound(i));
    }
    const double opt = OptimalWelfare(named.instance, effective).value;
    worst_ew = std::max(worst_ew,
                        opt / ExpectedEffectiveWelfare(named.instance, r.play));
    worst_sw = std::max(worst_sw,
                        opt / ExpectedSocialWelfare(named.instance, r.play));
    plays.push_back({named.id, &named.instance, std::move(r)});
  }

  double bayes_ew = 0.0, bayes_sw = 0.0, bayes_eps = 0.0;
  int bayes_converged = 0;
  const auto games = BuildBudgetBayesianSuite(7, 10);
  SearchConfig br;
  br.axes = {GridAxis{0.0, 2.0, 1e-3}};
  BrDynamicsOptions options;
  options.max_rounds = 2000;
  options.tolerance = 1e-10;
  options.damping = 0.5;
  for (const auto& named : games) {
    const BayesianGame& g = named.game;
    std::vector<std::vector<BidVector>> start(g.num_agents());
    for (int i = 0; i < g.num_agents(); ++i) {
      start[i].assign(g.num_types(i), BidVector{0.1});
    }
    const BayesianBrResult r = BayesianBrDynamics(g, start, {br}, options);
    bayes_converged += r.converged;
    bayes_eps = std::max(
        bayes_eps, VerifyBayesianNe(g, r.Strategy(), {br}, 1e-6).eps);
    const double opt = BayesianOptimalWelfare(g, effective);
    bayes_ew = std::max(bayes_ew,
                        opt / BayesianInterimEffectiveWelfare(g, r.Strategy()));
    bayes_sw =
        std::max(bayes_sw, opt / BayesianExpectedWelfare(g, r.Strategy()));
  }
  const double ew_bound = kPhi + 1.0 + kBudgetSlack;
  const double sw_bound = 2.0 + kBudgetSlack;
  const bool pass = worst_ew <= ew_bound && worst_sw <= sw_bound &&
                    bayes_converged == static_cast<int>(games.size()) &&
                    bayes_ew <= ew_bound && bayes_sw <= sw_bound;
  Report(6, pass, "budgeted welfare bounds, learned play and Bayesian games",
         Format("%zu learned (max regret/T %.4f): EW*/EW=%.4f, EW*/SW=%.4f; "
                "%d/%zu Bayesian converged (eps %.2g): EW*/EW=%.4f, "
                "EW*/SW=%.4f; bounds %.4f and %.2f",
                suite.size(), worst_regret, worst_ew, worst_sw, bayes_converged,
                games.size(), bayes_eps, bayes_ew, bayes_sw, ew_bound,
                sw_bound));
  return plays;
}

void DeviationCriterion(const std::vector<LearnedPlay>& subadditive,
                        const std::vector<LearnedPlay>& budgeted) {
  int checks = 0, held = 0;
  double min_slack = 1e9;
  for (const auto* group : {&subadditive, &budgeted}) {
    for (const auto& p : *group) {
      const WelfareReport opt = OptimalWelfare(*p.instance);
      const InequalityCheck c = CheckPriceMatchingBound(
          *p.instance, p.result.play, opt.allocation, kDeviationDraws, 3,
          kDeviationSlack);
      ++checks;
      held += c.holds;
      min_slack = std::min(min_slack, c.lhs - c.rhs);
    }
  }
  int truncated_checks = 0, truncated_held = 0;
  double truncated_slack = 1e9;
  std::uint64_t draws = 0, infeasible = 0;
  WelfareOptions effective;
  effective.mode = WelfareMode::kEffective;
  for (const auto& p : budgeted) {
    const Instance& inst = *p.instance;
    const WelfareReport opt = OptimalWelfare(inst, effective);
    for (int i = 0; i < inst.num_agents(); ++i) {
      const InequalityCheck c = CheckTruncatedDeviationBound(
          inst, i, p.result.play, opt.allocation, kPhi, kDeviationDraws, 9,
          kDeviationSlack);
      ++truncated_checks;
      truncated_held += c.holds;
      truncated_slack = std::min(truncated_slack, c.lhs - c.rhs);

      Rng rng(100 + i);
      const auto prices = SamplePrices(p.result.play, i, kDeviationDraws, rng);
      const Valuation capped = Truncate(inst.valuation(i), inst.budget(i));
      const DeviationSampler s = TruncatedPriceDeviation(
          capped, opt.allocation.row(i), prices, kPhi, inst.budget(i));
      for (std::uint64_t k = 0; k < kFeasibilityDraws; ++k) {
        infeasible += Payment(s.Sample(rng)) > inst.budget(i);
      }
      draws += kFeasibilityDraws;
    }
  }
  const bool pass = held == checks && truncated_held == truncated_checks &&
                    infeasible == 0;
  Report(7, pass, "deviation inequalities and budget feasibility",
         Format("price matching %d/%d (min lhs-rhs %.4f), truncated %d/%d "
                "(min lhs-rhs %.4f), slack %.2f; %llu/%llu draws over budget",
                held, checks, min_slack, truncated_held, truncated_checks,
                truncated_slack, kDeviationSlack,
                static_cast<unsigned long long>(infeasible),
                static_cast<unsigned long long>(draws)));
}

void PropertyCriterion() {
  bool pass = true;
  std::string detail;
  for (const auto& named : BuildValuationSamples()) {
    const PropertyReport sub =
        CheckSubadditive(named.valuation, kPropertySamples, 1);
    const bool mono = CheckMonotone(named.valuation, kPropertySamples, 1).holds();
    const bool norm =
        CheckNormalized(named.valuation, kPropertySamples, 1).holds();
    bool ok = mono && norm && sub.holds() == named.subadditive;
    if (named.id == "geometric-mean") {
      ok = ok && sub.witness &&
           sub.witness->first == std::vector<double>{1.0, 0.0} &&
           sub.witness->second == std::vector<double>{0.0, 1.0};
    }
    if (!ok || !named.subadditive) {
      detail += named.id + (sub.holds() ? " subadditive" : " not subadditive") +
                (ok ? " (expected); " : " (UNEXPECTED); ");
    }
    pass = pass && ok;
  }
  Report(8, pass, "valuation property suites",
         detail + "all families monotone and normalized");
}

}  // namespace
}  // namespace proplab

int main() {
  using namespace proplab;
  const auto start = Clock::now();
  MinCoordinateGapCriterion();
  ScaleFreeCriterion();
  PolyhedralCriterion();
  ConcaveCriterion();
  const auto subadditive = BuildSubadditiveSuite();
  const auto learned = LearningCriterion(subadditive);
  const auto budget = BuildBudgetSuite(7, 50);
  const auto budget_learned = BudgetCriterion(budget);
  DeviationCriterion(learned, budget_learned);
  PropertyCriterion();
  std::printf("%d of 8 criteria failed, %.1fs\n", failures, Seconds(start));
  return failures == 0 ? 0 : 1;
}
