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

#include "proplab/harness/scenario.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <set>
#include <stdexcept>
#include <thread>

#include "proplab/bayesian.h"
#include "proplab/constructions.h"
#include "proplab/equilibrium.h"
#include "proplab/harness/codec.h"
#include "proplab/learning.h"
#include "proplab/welfare.h"

namespace proplab::harness {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// phi + 1 + 0.05 and 2 + 0.05.
constexpr const char* kBudgetBound = "ratio<=2.668034;ew_opt/sw_eq<=2.05";

using Clock = std::chrono::steady_clock;

double ElapsedMs(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

// Shortest decimal that parses back to x.
std::string Num(double x) {
  char buf[40];
  for (int digits = 1; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

bool IsSuite(const std::string& s) { return s.size() > 6 && s.ends_with("-suite"); }

std::string MechanismName(const Mechanism& m) {
  return m.polyhedral() ? "polyhedral" : "standard";
}

void Finish(const ScenarioConfig& cfg, const std::string& default_bound,
            RunReport& r) {
  r.bound = cfg.bound.empty() ? default_bound : cfg.bound;
  r.ratio = RecomputeRatio(r);
  r.seed = cfg.seed;
  r.pass = EvaluateBound(r);
}

GridAxis VerifyAxis(const ScenarioConfig& cfg, double upper) {
  return GridAxis{0.0, cfg.grid_upper > 0 ? cfg.grid_upper : upper,
                  cfg.grid_step};
}

SearchConfig VerifyConfig(const ScenarioConfig& cfg, double upper,
                          bool polyhedral = false) {
  SearchConfig c;
  c.axes = {VerifyAxis(cfg, upper)};
  c.refinement_rounds = cfg.refinement_rounds;
  if (polyhedral) c.allocation_step = cfg.grid_step;
  c.seed = cfg.seed;
  return c;
}

BrDynamicsOptions BrOptions(const ScenarioConfig& cfg) {
  BrDynamicsOptions o;
  o.max_rounds = cfg.rounds;
  o.tolerance = cfg.br_tolerance;
  o.damping = cfg.damping;
  return o;
}

WelfareOptions Oracle(const ScenarioConfig& cfg, WelfareMode mode) {
  WelfareOptions w;
  w.resolution = cfg.resolution;
  w.mode = mode;
  return w;
}

void FillOptimum(const ScenarioConfig& cfg, const Instance& inst,
                 RunReport& r) {
  r.sw_opt = OptimalWelfare(inst, Oracle(cfg, WelfareMode::kSocial)).value;
  if (inst.has_budgets()) {
    r.ew_opt =
        OptimalWelfare(inst, Oracle(cfg, WelfareMode::kEffective)).value;
  }
}

// Solves and scores one complete-information instance.
RunReport RunInstance(const ScenarioConfig& cfg, const std::string& id,
                      const Instance& inst, const std::string& default_bound,
                      const BidProfile* given) {
  const auto start = Clock::now();
  RunReport r;
  r.instance_id = id;
  r.mechanism = MechanismName(inst.mechanism());
  const int n = inst.num_agents();
  const int m = inst.num_columns();
  const double bid_upper = cfg.grid_upper > 0 ? cfg.grid_upper : 2.0;
  std::string bound = default_bound;

  if (cfg.solver == "hedge") {
    std::vector<ActionGrid> grids;
    for (int i = 0; i < n; ++i) {
      grids.push_back(ActionGrid::Product(
          m, GridAxis{0.0, bid_upper, cfg.solver_step},
          std::min(inst.valuation(i).MaxValue(), inst.budget(i))));
    }
    HedgeOptions h;
    h.rounds = cfg.rounds;
    h.seed = cfg.seed;
    const HedgeResult learned = HedgeLearn(inst, grids, h);
    r.eq_kind = "cce";
    r.eps = 0.0;
    for (int i = 0; i < n; ++i) r.eps = std::max(r.eps, learned.RegretPerRound(i));
    r.eps_ci = 0.0;
    r.sw_eq = ExpectedSocialWelfare(inst, learned.play);
    if (inst.has_budgets()) {
      r.ew_eq = ExpectedEffectiveWelfare(inst, learned.play);
    }
  } else {
    BidProfile profile;
    bool converged = true;
    if (cfg.solver == "br") {
      const BidProfile init(Matrix(n, m, cfg.start_bid));
      SearchConfig c = VerifyConfig(cfg, 4.0);
      c.axes = {GridAxis{0.0, cfg.grid_upper > 0 ? cfg.grid_upper : 4.0,
                         cfg.solver_step}};
      if (inst.mechanism().polyhedral()) c.allocation_step = cfg.solver_step;
      const BrDynamicsResult dyn = BrDynamics(inst, init, {c}, BrOptions(cfg));
      profile = dyn.profile;
      converged = dyn.converged;
    } else {
      if (given == nullptr) {
        throw std::invalid_argument("solver none needs a given profile");
      }
      profile = *given;
    }
    r.sw_eq = SocialWelfare(inst, inst.mechanism().Allocate(profile));
    if (inst.has_budgets()) {
      r.ew_eq = EffectiveWelfare(inst, inst.mechanism().Allocate(profile));
    }
    if (!converged) {
      r.eq_kind = "unconverged";
      r.eps = kNaN;
      r.eps_ci = kNaN;
      bound = "none";
    } else {
      r.eq_kind = "pure";
      if (cfg.verifier == "pure") {
        const EquilibriumReport v = VerifyPureNe(
            inst, profile, {VerifyConfig(cfg, 4.0, inst.mechanism().polyhedral())},
            cfg.tolerance);
        r.eps = v.eps;
        r.eps_ci = 0.0;
      } else {
        r.eps = kNaN;
        r.eps_ci = kNaN;
      }
    }
  }
  FillOptimum(cfg, inst, r);
  Finish(cfg, bound, r);
  if (r.eq_kind == "unconverged" && cfg.bound.empty()) r.bound = "none";
  r.wallclock_ms = ElapsedMs(start);
  return r;
}

RunReport RunMinCoordinate(const ScenarioConfig& cfg) {
  const auto start = Clock::now();
  const MinCoordinateBuild b = BuildMinCoordinateGap(cfg.m);
  RunReport r;
  r.instance_id = cfg.id;
  r.mechanism = "standard";
  r.eq_kind = "bayesian";
  if (cfg.verifier == "bayesian") {
    const EquilibriumReport v = VerifyBayesianNe(
        b.game, b.strategy,
        MinCoordinateDeviationGrids(b.construction, cfg.grid_step,
                                    cfg.refinement_rounds),
        cfg.tolerance);
    r.eps = v.eps;
    r.eps_ci = 0.0;
  } else {
    r.eps = r.eps_ci = kNaN;
  }
  r.sw_eq = BayesianExpectedWelfare(b.game, b.strategy);
  r.sw_opt =
      BayesianOptimalWelfare(b.game, Oracle(cfg, WelfareMode::kSocial));
  Finish(cfg,
         "ratio>=" + Num(b.construction.lower_bound()) + ";eps<=" +
             Num(cfg.tolerance),
         r);
  r.wallclock_ms = ElapsedMs(start);
  return r;
}

RunReport RunScaleFree(const ScenarioConfig& cfg) {
  const auto start = Clock::now();
  const ScaleFreeBuild b = BuildScaleFree(cfg.m, cfg.V);
  const ScaleFreeGap& c = b.construction;
  RunReport r;
  r.instance_id = cfg.id;
  r.mechanism = "standard";
  r.eq_kind = "mixed";
  if (cfg.verifier == "mixed") {
    int points = 21;
    if (cfg.grid_step > 0) {
      points = static_cast<int>(std::floor(2.0 * c.cap / cfg.grid_step)) + 1;
    }
    const EquilibriumReport v =
        VerifyMixedNe(b.instance, b.profile, cfg.samples,
                      ScaleFreeDeviationGrids(c, points), cfg.seed,
                      cfg.tolerance);
    r.eps = v.eps;
    r.eps_ci = v.ci_halfwidth;
  } else {
    r.eps = r.eps_ci = kNaN;
  }
  const Estimate sw =
      MixedWelfareMonteCarlo(b.instance, b.profile, cfg.samples, cfg.seed);
  r.sw_eq = sw.mean;
  r.sw_opt = OptimalWelfare(b.instance, Oracle(cfg, WelfareMode::kSocial))
                 .value;
  Finish(cfg,
         "ratio>=" + Num(c.ratio_bound() - 0.02) + ";eps<=" +
             Num(cfg.tolerance) + ";sw_eq<=" +
             Num(c.welfare_upper_bound() + 1.96 * sw.std_error),
         r);
  r.wallclock_ms = ElapsedMs(start);
  return r;
}

RunReport RunPolyhedralGap(const ScenarioConfig& cfg) {
  const PolyhedralGapBuild b = BuildPolyhedralGap(cfg.eps);
  ScenarioConfig local = cfg;
  if (local.grid_upper == 0.0) local.grid_upper = 1.0;
  return RunInstance(local, cfg.id, b.instance,
                     "ratio<=2;eps<=" + Num(cfg.tolerance), &b.profile);
}

RunReport RunBayesGame(const ScenarioConfig& cfg, const NamedGame& named) {
  const auto start = Clock::now();
  const BayesianGame& g = named.game;
  std::vector<std::vector<BidVector>> init(g.num_agents());
  for (int i = 0; i < g.num_agents(); ++i) {
    init[i].assign(g.num_types(i),
                   BidVector(g.mechanism().num_columns(), cfg.start_bid));
  }
  SearchConfig c = VerifyConfig(cfg, 2.0);
  c.axes = {GridAxis{0.0, cfg.grid_upper > 0 ? cfg.grid_upper : 2.0,
                     cfg.solver_step}};
  const BayesianBrResult dyn = BayesianBrDynamics(g, init, {c}, BrOptions(cfg));
  const StrategyMap strategy = dyn.Strategy();
  RunReport r;
  r.instance_id = named.id;
  r.mechanism = MechanismName(g.mechanism());
  std::string bound = std::string(kBudgetBound) + ";eps<=" + Num(cfg.tolerance);
  if (!dyn.converged) {
    r.eq_kind = "unconverged";
    r.eps = r.eps_ci = kNaN;
    bound = "none";
  } else {
    r.eq_kind = "bayesian";
    if (cfg.verifier == "bayesian") {
      r.eps = VerifyBayesianNe(g, strategy, {VerifyConfig(cfg, 2.0)},
                               cfg.tolerance)
                  .eps;
      r.eps_ci = 0.0;
    } else {
      r.eps = r.eps_ci = kNaN;
    }
  }
  r.sw_eq = BayesianExpectedWelfare(g, strategy);
  r.ew_eq = BayesianInterimEffectiveWelfare(g, strategy);
  r.sw_opt = BayesianOptimalWelfare(g, Oracle(cfg, WelfareMode::kSocial));
  r.ew_opt = BayesianOptimalWelfare(g, Oracle(cfg, WelfareMode::kEffective));
  Finish(cfg, bound, r);
  r.wallclock_ms = ElapsedMs(start);
  return r;
}

std::vector<RunReport> RunSuite(const ScenarioConfig& cfg,
                                const std::vector<NamedInstance>& suite,
                                const std::string& bound) {
  std::vector<RunReport> out;
  out.reserve(suite.size());
  for (const auto& named : suite) {
    out.push_back(RunInstance(cfg, named.id, named.instance, bound, nullptr));
  }
  return out;
}

std::vector<RunReport> Dispatch(const ScenarioConfig& cfg) {
  const std::string& s = cfg.scenario;
  if (s == "bayesian-min") return {RunMinCoordinate(cfg)};
  if (s == "scalefree") return {RunScaleFree(cfg)};
  if (s == "poly-lb") return {RunPolyhedralGap(cfg)};
  const std::string eps_clause = ";eps<=" + Num(cfg.tolerance);
  if (s == "budget-suite") {
    return RunSuite(cfg, BuildBudgetSuite(cfg.seed, cfg.count),
                    kBudgetBound + eps_clause);
  }
  if (s == "budget-bayes-suite") {
    std::vector<RunReport> out;
    for (const auto& g : BuildBudgetBayesianSuite(cfg.seed, cfg.count)) {
      out.push_back(RunBayesGame(cfg, g));
    }
    return out;
  }
  if (s == "concave-suite") {
    return RunSuite(cfg, BuildConcaveSuite(cfg.seed, cfg.count),
                    "ratio<=1.334333" + eps_clause);
  }
  if (s == "polyhedral-suite") {
    return RunSuite(cfg, BuildPolyhedralSuite(cfg.seed, cfg.count),
                    "ratio<=2.001");
  }
  if (s == "subadditive-suite") {
    const std::vector<NamedInstance> suite = BuildSubadditiveSuite();
    std::vector<RunReport> out;
    for (const auto& named : suite) {
      if (static_cast<int>(out.size()) == cfg.count) break;
      RunReport r = RunInstance(cfg, named.id, named.instance, "none", nullptr);
      if (cfg.bound.empty()) {
        r.bound = "sw_eq>=" + Num(r.sw_opt / 2.0 - 0.05) + ";eps<=" +
                  Num(cfg.tolerance);
        r.pass = EvaluateBound(r);
      }
      out.push_back(std::move(r));
    }
    return out;
  }
  // "instance"
  const Instance inst = InstanceFromJson(cfg.instance);
  std::optional<BidProfile> profile;
  if (cfg.instance.contains("profile")) {
    profile = BidProfile(MatrixFromJson(cfg.instance.at("profile")));
  }
  return {RunInstance(cfg, cfg.id.empty() ? "instance" : cfg.id, inst, "none",
                      profile ? &*profile : nullptr)};
}

void Require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument("invalid config: " + message);
}

}  // namespace

const std::vector<std::string>& ScenarioNames() {
  static const std::vector<std::string> names = {
      "bayesian-min",       "scalefree",     "poly-lb",
      "budget-suite",       "budget-bayes-suite", "concave-suite",
      "polyhedral-suite",   "subadditive-suite",  "instance"};
  return names;
}

ScenarioConfig DefaultConfig(const std::string& scenario) {
  ScenarioConfig c;
  c.scenario = scenario;
  c.id = scenario;
  if (scenario == "bayesian-min") {
    c.m = 4;
    c.verifier = "bayesian";
    c.grid_step = 1e-4;
    c.refinement_rounds = 3;
    c.tolerance = 1e-6;
    c.resolution = 2;
  } else if (scenario == "scalefree") {
    c.m = 100;
    c.V = 1.0;
    c.verifier = "mixed";
    c.samples = 100'000;
    c.grid_step = 0.0;
    c.tolerance = 0.01;
    c.resolution = 2;
    c.seed = 3;
  } else if (scenario == "poly-lb") {
    c.mechanism = "polyhedral";
    c.eps = 0.01;
    c.verifier = "pure";
    c.grid_step = 1e-5;
    c.tolerance = 1e-6;
  } else if (scenario == "budget-suite") {
    c.solver = "hedge";
    c.rounds = 50'000;
    c.solver_step = 0.01;
    c.benchmark = "effective";
    c.seed = 7;
    c.count = 50;
    c.tolerance = 0.01;
  } else if (scenario == "budget-bayes-suite") {
    c.solver = "br";
    c.rounds = 2000;
    c.solver_step = 1e-3;
    c.damping = 0.5;
    c.br_tolerance = 1e-10;
    c.verifier = "bayesian";
    c.grid_step = 1e-3;
    c.tolerance = 1e-6;
    c.benchmark = "effective";
    c.seed = 7;
    c.count = 10;
  } else if (scenario == "concave-suite") {
    c.solver = "br";
    c.rounds = 2000;
    c.solver_step = 1e-3;
    c.damping = 0.5;
    c.br_tolerance = 1e-10;
    c.start_bid = 0.0;
    c.verifier = "pure";
    c.grid_step = 1e-3;
    c.grid_upper = 4.0;
    c.tolerance = 1e-6;
    c.seed = 11;
  } else if (scenario == "polyhedral-suite") {
    c.mechanism = "polyhedral";
    c.solver = "br";
    c.rounds = 1000;
    c.solver_step = 1e-3;
    c.damping = 0.5;
    c.br_tolerance = 1e-9;
    c.verifier = "none";
    c.grid_upper = 4.0;
    c.resolution = 100;
    c.seed = 13;
  } else if (scenario == "subadditive-suite") {
    c.solver = "hedge";
    c.rounds = 100'000;
    c.solver_step = 0.01;
    c.tolerance = 0.01;
    c.seed = 5;
    c.count = 6;
  } else if (scenario == "instance") {
    c.verifier = "pure";
  }
  return c;
}

void Validate(const ScenarioConfig& c) {
  const auto& names = ScenarioNames();
  Require(std::find(names.begin(), names.end(), c.scenario) != names.end(),
          "unknown scenario '" + c.scenario + "'");
  Require(c.mechanism == "standard" || c.mechanism == "polyhedral",
          "mechanism must be standard or polyhedral");
  Require(c.solver == "none" || c.solver == "br" || c.solver == "hedge",
          "solver must be none, br or hedge");
  Require(c.verifier == "none" || c.verifier == "pure" ||
              c.verifier == "mixed" || c.verifier == "bayesian",
          "verifier must be none, pure, mixed or bayesian");
  Require(c.benchmark == "social" || c.benchmark == "effective",
          "benchmark must be social or effective");
  Require(c.m >= 1, "m must be >= 1");
  Require(c.V > 0 && std::isfinite(c.V), "V must be positive");
  Require(c.eps > 0 && c.eps < 1, "eps must be in (0, 1)");
  Require(c.count >= 1, "count must be >= 1");
  Require(c.rounds >= 0, "rounds must be >= 0");
  Require(c.solver_step > 0, "solver_step must be positive");
  Require(c.damping >= 0 && c.damping < 1, "damping must be in [0, 1)");
  Require(c.br_tolerance > 0, "br_tolerance must be positive");
  Require(c.start_bid >= 0 && std::isfinite(c.start_bid),
          "start_bid must be >= 0");
  Require(c.grid_step >= 0 && c.grid_upper >= 0,
          "grid_step and grid_upper must be >= 0");
  Require(c.refinement_rounds >= 0, "refinement_rounds must be >= 0");
  Require(c.tolerance >= 0, "tolerance must be >= 0");
  Require(c.resolution >= 1, "resolution must be >= 1");

  const std::string& s = c.scenario;
  if (s == "bayesian-min" || s == "scalefree" || s == "poly-lb") {
    Require(c.solver == "none", s + " uses its constructed profile");
  }
  if (s == "bayesian-min") {
    Require(c.verifier == "none" || c.verifier == "bayesian",
            "bayesian-min verifies with bayesian");
    Require(c.grid_step > 0, "bayesian-min needs grid_step > 0");
  }
  if (s == "scalefree") {
    Require(c.verifier == "none" || c.verifier == "mixed",
            "scalefree verifies with mixed");
    Require(c.m >= 4, "scalefree needs m >= 4");
    Require(c.samples >= 100, "scalefree needs samples >= 100");
  }
  if (s == "poly-lb" || s == "polyhedral-suite") {
    Require(c.mechanism == "polyhedral", s + " is polyhedral");
  } else if (s != "instance") {
    Require(c.mechanism == "standard", s + " uses the standard mechanism");
  }
  if (s == "budget-bayes-suite") {
    Require(c.solver == "br", "budget-bayes-suite solves with br");
    Require(c.verifier == "none" || c.verifier == "bayesian",
            "budget-bayes-suite verifies with bayesian");
  } else if (IsSuite(s)) {
    Require(c.solver != "none", s + " needs a solver");
    Require(c.verifier == "none" || c.verifier == "pure",
            s + " verifies with pure");
  }
  if (c.solver != "none") Require(c.rounds >= 1, "rounds must be >= 1");
  if (c.verifier == "pure" && s != "poly-lb" && s != "bayesian-min") {
    Require(c.grid_step > 0, "pure verification needs grid_step > 0");
  }
  if (s == "poly-lb") Require(c.grid_step > 0, "poly-lb needs grid_step > 0");
  if (s == "budget-bayes-suite" && c.verifier == "bayesian") {
    Require(c.grid_step > 0, "bayesian verification needs grid_step > 0");
  }
  if (s == "budget-suite" || s == "budget-bayes-suite") {
    Require(c.benchmark == "effective", s + " is budgeted");
  }
  if (s == "instance") {
    Require(c.instance.is_object(), "instance scenario needs an instance");
    Require(c.verifier == "none" || c.verifier == "pure",
            "instance verifies with pure");
    Require(c.solver != "none" || c.instance.contains("profile"),
            "solver none needs instance.profile");
  }
}

Json ConfigToJson(const ScenarioConfig& c) {
  return Json{{"id", c.id},
              {"scenario", c.scenario},
              {"mechanism", c.mechanism},
              {"m", c.m},
              {"V", c.V},
              {"eps", c.eps},
              {"count", c.count},
              {"instance", c.instance},
              {"solver", c.solver},
              {"rounds", c.rounds},
              {"solver_step", c.solver_step},
              {"damping", c.damping},
              {"br_tolerance", c.br_tolerance},
              {"start_bid", c.start_bid},
              {"verifier", c.verifier},
              {"grid_step", c.grid_step},
              {"grid_upper", c.grid_upper},
              {"refinement_rounds", c.refinement_rounds},
              {"samples", c.samples},
              {"tolerance", c.tolerance},
              {"resolution", c.resolution},
              {"benchmark", c.benchmark},
              {"bound", c.bound},
              {"seed", c.seed},
              {"csv_path", c.csv_path},
              {"json_path", c.json_path}};
}

ScenarioConfig ConfigFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("scenario")) {
    throw std::invalid_argument("config needs a \"scenario\" key");
  }
  Json merged = ConfigToJson(DefaultConfig(j.at("scenario").get<std::string>()));
  for (const auto& [key, value] : j.items()) {
    if (!merged.contains(key)) {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
    merged[key] = value;
  }
  ScenarioConfig c;
  c.id = merged.at("id").get<std::string>();
  c.scenario = merged.at("scenario").get<std::string>();
  c.mechanism = merged.at("mechanism").get<std::string>();
  c.m = merged.at("m").get<int>();
  c.V = merged.at("V").get<double>();
  c.eps = merged.at("eps").get<double>();
  c.count = merged.at("count").get<int>();
  c.instance = merged.at("instance");
  c.solver = merged.at("solver").get<std::string>();
  c.rounds = merged.at("rounds").get<int>();
  c.solver_step = merged.at("solver_step").get<double>();
  c.damping = merged.at("damping").get<double>();
  c.br_tolerance = merged.at("br_tolerance").get<double>();
  c.start_bid = merged.at("start_bid").get<double>();
  c.verifier = merged.at("verifier").get<std::string>();
  c.grid_step = merged.at("grid_step").get<double>();
  c.grid_upper = merged.at("grid_upper").get<double>();
  c.refinement_rounds = merged.at("refinement_rounds").get<int>();
  c.samples = merged.at("samples").get<std::uint64_t>();
  c.tolerance = merged.at("tolerance").get<double>();
  c.resolution = merged.at("resolution").get<int>();
  c.benchmark = merged.at("benchmark").get<std::string>();
  c.bound = merged.at("bound").get<std::string>();
  c.seed = merged.at("seed").get<std::uint64_t>();
  c.csv_path = merged.at("csv_path").get<std::string>();
  c.json_path = merged.at("json_path").get<std::string>();
  return c;
}

std::vector<RunReport> RunScenario(const ScenarioConfig& config) {
  const std::string id = config.id.empty() ? config.scenario : config.id;
  try {
    Validate(config);
    return Dispatch(config);
  } catch (const std::exception& e) {
    throw std::runtime_error(id + ": " + e.what());
  }
}

std::vector<std::vector<RunReport>> RunBatch(
    const std::vector<ScenarioConfig>& configs, unsigned threads) {
  std::vector<std::vector<RunReport>> results(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(1, configs.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < configs.size(); k = next++) {
      try {
        results[k] = RunScenario(configs[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace proplab::harness
