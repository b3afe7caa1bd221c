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

#ifndef PROPLAB_HARNESS_SCENARIO_H_
#define PROPLAB_HARNESS_SCENARIO_H_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

namespace proplab::harness {

using Json = nlohmann::json;

// Names accepted in ScenarioConfig::scenario.
const std::vector<std::string>& ScenarioNames();

struct ScenarioConfig {
  std::string id;
  // bayesian-min | scalefree | poly-lb | budget-suite | budget-bayes-suite |
  // concave-suite | polyhedral-suite | subadditive-suite | instance
  std::string scenario;
  std::string mechanism = "standard";  // standard | polyhedral
  int m = 4;
  double V = 1.0;
  double eps = 0.01;
  int count = 50;
  // Scenario "instance": an instance object (see codec.h), optionally with a
  // "profile" matrix used when solver is "none".
  Json instance;

  std::string solver = "none";  // none | br | hedge
  int rounds = 0;
  double solver_step = 0.01;
  double damping = 0.0;
  double br_tolerance = 1e-9;
  double start_bid = 0.1;  // every bid of the br starting profile

  std::string verifier = "none";  // none | pure | mixed | bayesian
  double grid_step = 1e-4;  // 0 selects the scenario's own grid
  double grid_upper = 0.0;  // 0 selects the scenario's own range
  int refinement_rounds = 3;
  std::uint64_t samples = 100'000;
  double tolerance = 1e-6;

  int resolution = 20;
  std::string benchmark = "social";  // social | effective
  // Overrides the scenario's bound when nonempty (syntax as RunReport).
  std::string bound;
  std::uint64_t seed = 0;
  std::string csv_path;
  std::string json_path;

  bool operator==(const ScenarioConfig&) const = default;
};

// Config with the defaults the named scenario was tuned for.
ScenarioConfig DefaultConfig(const std::string& scenario);

// Throws std::invalid_argument on unknown names or inconsistent fields.
void Validate(const ScenarioConfig& config);

Json ConfigToJson(const ScenarioConfig& config);
// Starts from DefaultConfig(j["scenario"]) and overrides the given keys.
ScenarioConfig ConfigFromJson(const Json& j);

struct RunReport {
  std::string instance_id;
  std::string mechanism;
  std::string eq_kind;  // pure | mixed | bayesian | cce | unconverged
  double eps = 0.0;
  double eps_ci = 0.0;
  double sw_eq = 0.0;
  double ew_eq = std::numeric_limits<double>::quiet_NaN();
  double sw_opt = 0.0;
  double ew_opt = std::numeric_limits<double>::quiet_NaN();
  double ratio = 0.0;  // ew_opt / ew_eq when budgeted, else sw_opt / sw_eq
  // Clauses "lhs op value" joined by ';'. lhs is a field name or "a/b" of
  // two field names, op is <= or >=; "none" is vacuous.
  std::string bound;
  bool pass = false;
  std::uint64_t seed = 0;
  double wallclock_ms = 0.0;
};

// OPT / equilibrium welfare from the stored fields.
double RecomputeRatio(const RunReport& report);
// Re-derives the verdict from the stored numbers and the bound string.
bool EvaluateBound(const RunReport& report);

// Builds, solves, verifies and scores one scenario; suites give one report
// per instance. Errors are rethrown as std::runtime_error prefixed with the
// scenario id.
std::vector<RunReport> RunScenario(const ScenarioConfig& config);

// Runs configs concurrently on up to `threads` workers; results keep the
// config order.
std::vector<std::vector<RunReport>> RunBatch(
    const std::vector<ScenarioConfig>& configs, unsigned threads = 0);

enum class ReportFormat { kCsv, kJson };

ReportFormat ParseFormat(const std::string& name);

// CSV header: instance_id,mechanism,eq_kind,eps,eps_ci,sw_eq,ew_eq,sw_opt,
// ew_opt,ratio,bound,pass,seed,wallclock_ms. Missing values are empty in
// CSV and null in JSON.
void WriteReports(const std::vector<RunReport>& reports, ReportFormat format,
                  std::ostream& out);
// Throws on an empty list or an unwritable path.
void EmitReport(const std::vector<RunReport>& reports, ReportFormat format,
                const std::string& path);

std::vector<RunReport> ReadCsvReports(std::istream& in);
std::vector<RunReport> ReadJsonReports(std::istream& in);

}  // namespace proplab::harness

#endif  // PROPLAB_HARNESS_SCENARIO_H_
