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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "proplab/constructions.h"
#include "proplab/harness/scenario.h"
#include "proplab/valuation.h"

namespace {

using proplab::harness::RunReport;
using proplab::harness::ScenarioConfig;

struct OutputFlags {
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;
};

void AddOutputFlags(CLI::App* app, OutputFlags& flags) {
  app->add_option("--out", flags.out, "Report path");
  app->add_option("--format", flags.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

// Prints one line per report and writes the file; returns the exit code.
int Publish(const std::vector<RunReport>& reports, const OutputFlags& flags) {
  int failed = 0;
  for (const auto& r : reports) {
    std::printf("%s %-28s kind=%-11s ratio=%-10.6g eps=%-10.3g bound=%s\n",
                r.pass ? "PASS" : "FAIL", r.instance_id.c_str(),
                r.eq_kind.c_str(), r.ratio, r.eps, r.bound.c_str());
    failed += !r.pass;
  }
  std::printf("%zu reports, %d failed\n", reports.size(), failed);
  if (!flags.out.empty()) {
    proplab::harness::EmitReport(
        reports, proplab::harness::ParseFormat(flags.format), flags.out);
  }
  return failed == 0 ? 0 : 1;
}

std::vector<RunReport> Flatten(
    const std::vector<std::vector<RunReport>>& batches) {
  std::vector<RunReport> out;
  for (const auto& b : batches) out.insert(out.end(), b.begin(), b.end());
  return out;
}

proplab::harness::Json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return proplab::harness::Json::parse(in);
}

int CheckProps(int samples, std::uint64_t seed) {
  int failed = 0;
  for (const auto& named : proplab::BuildValuationSamples()) {
    const auto sub = proplab::CheckSubadditive(named.valuation, samples, seed);
    const auto mono = proplab::CheckMonotone(named.valuation, samples, seed);
    const auto norm = proplab::CheckNormalized(named.valuation, samples, seed);
    const bool ok =
        sub.holds() == named.subadditive && mono.holds() && norm.holds();
    std::string witness;
    if (sub.witness) {
      witness = " witness x=(";
      for (double v : sub.witness->first) witness += std::to_string(v) + " ";
      witness.back() = ')';
      witness += " y=(";
      for (double v : sub.witness->second) witness += std::to_string(v) + " ";
      witness.back() = ')';
    }
    std::printf("%s %-26s subadditive=%d (expected %d) monotone=%d "
                "normalized=%d%s\n",
                ok ? "PASS" : "FAIL", named.id.c_str(), sub.holds(),
                named.subadditive, mono.holds(), norm.holds(),
                witness.c_str());
    failed += !ok;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proportional allocation equilibrium and welfare harness"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "Verify a constructed profile");
  std::string v_scenario = "bayesian-min";
  int v_m = 0;
  double v_eps = 0.0, v_V = 0.0, v_grid = -1.0;
  std::uint64_t v_samples = 0, v_seed = 0;
  OutputFlags v_out;
  verify->add_option("--scenario", v_scenario, "Scenario name")
      ->check(CLI::IsMember(proplab::harness::ScenarioNames()));
  auto* v_m_opt = verify->add_option("--m", v_m, "Number of resources");
  auto* v_eps_opt = verify->add_option("--eps", v_eps, "Construction epsilon");
  auto* v_V_opt = verify->add_option("--V", v_V, "Value scale");
  auto* v_samples_opt =
      verify->add_option("--samples", v_samples, "Monte Carlo samples");
  auto* v_grid_opt = verify->add_option("--grid-step", v_grid, "Grid step");
  auto* v_seed_opt = verify->add_option("--seed", v_seed, "Seed");
  AddOutputFlags(verify, v_out);

  // solve
  auto* solve = app.add_subcommand("solve", "Run a solver on a suite");
  std::string s_scenario = "concave-suite", s_solver, s_config;
  int s_rounds = 0;
  double s_grid = 0.0;
  std::uint64_t s_seed = 0;
  OutputFlags s_out;
  solve->add_option("--scenario", s_scenario, "Suite or instance")
      ->check(CLI::IsMember(proplab::harness::ScenarioNames()));
  auto* s_solver_opt = solve->add_option("--solver", s_solver, "br or hedge")
                           ->check(CLI::IsMember({"br", "hedge"}));
  auto* s_rounds_opt = solve->add_option("--rounds", s_rounds, "Rounds");
  auto* s_grid_opt =
      solve->add_option("--grid-step", s_grid, "Solver bid grid step");
  auto* s_seed_opt = solve->add_option("--seed", s_seed, "Seed");
  solve->add_option("--instance", s_config,
                    "Instance JSON file for scenario 'instance'");
  AddOutputFlags(solve, s_out);

  // poa-report
  auto* report = app.add_subcommand("poa-report", "Run suites to a report");
  std::string r_suite = "all";
  OutputFlags r_out;
  std::vector<std::string> suites = {"bayesian-min",  "scalefree",
                                     "poly-lb",       "budget-suite",
                                     "budget-bayes-suite", "concave-suite",
                                     "polyhedral-suite",   "subadditive-suite"};
  std::vector<std::string> suite_choices = suites;
  suite_choices.push_back("all");
  report->add_option("--suite", r_suite, "Scenario name or all")
      ->check(CLI::IsMember(suite_choices));
  AddOutputFlags(report, r_out);
  report->add_option("--threads", r_out.threads, "Worker threads");

  // check-props
  auto* props =
      app.add_subcommand("check-props", "Valuation property suites");
  int p_samples = 10'000;
  std::uint64_t p_seed = 1;
  props->add_option("--samples", p_samples, "Random pairs per check");
  props->add_option("--seed", p_seed, "Seed");

  // run
  auto* run = app.add_subcommand("run", "Run JSON scenario configs");
  std::string config_path;
  OutputFlags run_out;
  run->add_option("--config", config_path, "Config object or array")
      ->required();
  AddOutputFlags(run, run_out);
  run->add_option("--threads", run_out.threads, "Worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      ScenarioConfig c = proplab::harness::DefaultConfig(v_scenario);
      if (*v_m_opt) c.m = v_m;
      if (*v_eps_opt) c.eps = v_eps;
      if (*v_V_opt) c.V = v_V;
      if (*v_samples_opt) c.samples = v_samples;
      if (*v_grid_opt) c.grid_step = v_grid;
      if (*v_seed_opt) c.seed = v_seed;
      return Publish(proplab::harness::RunScenario(c), v_out);
    }
    if (*solve) {
      ScenarioConfig c = proplab::harness::DefaultConfig(s_scenario);
      if (*s_solver_opt) c.solver = s_solver;
      if (*s_rounds_opt) c.rounds = s_rounds;
      if (*s_grid_opt) c.solver_step = s_grid;
      if (*s_seed_opt) c.seed = s_seed;
      if (!s_config.empty()) c.instance = ReadJson(s_config);
      if (c.solver == "none") c.solver = "br";
      if (c.rounds == 0) c.rounds = c.solver == "hedge" ? 10'000 : 200;
      return Publish(proplab::harness::RunScenario(c), s_out);
    }
    if (*report) {
      std::vector<ScenarioConfig> configs;
      for (const auto& name : suites) {
        if (r_suite == "all" || r_suite == name) {
          configs.push_back(proplab::harness::DefaultConfig(name));
        }
      }
      return Publish(Flatten(proplab::harness::RunBatch(configs, r_out.threads)),
                     r_out);
    }
    if (*props) return CheckProps(p_samples, p_seed);
    if (*run) {
      const auto j = ReadJson(config_path);
      std::vector<ScenarioConfig> configs;
      if (j.is_array()) {
        for (const auto& item : j) {
          configs.push_back(proplab::harness::ConfigFromJson(item));
        }
      } else {
        configs.push_back(proplab::harness::ConfigFromJson(j));
      }
      const auto batches = proplab::harness::RunBatch(configs, run_out.threads);
      for (std::size_t k = 0; k < configs.size(); ++k) {
        if (!configs[k].csv_path.empty()) {
          proplab::harness::EmitReport(batches[k],
                                       proplab::harness::ReportFormat::kCsv,
                                       configs[k].csv_path);
        }
        if (!configs[k].json_path.empty()) {
          proplab::harness::EmitReport(batches[k],
                                       proplab::harness::ReportFormat::kJson,
                                       configs[k].json_path);
        }
      }
      return Publish(Flatten(batches), run_out);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
