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

#include "proplab/harness/codec.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace proplab::harness {
namespace {

// JSON has no infinity; unbounded budgets are written as null.
Json Number(double x) {
  if (std::isinf(x)) return nullptr;
  return x;
}

double NumberFrom(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

Json TieBreakToJson(const TieBreak& t) {
  if (t.kind == TieBreak::Kind::kSplitEqually) return "split";
  return Json{{"to_agent", t.agent}};
}

TieBreak TieBreakFromJson(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "split") {
    return TieBreak::SplitEqually();
  }
  if (j.is_object() && j.contains("to_agent")) {
    return TieBreak::ToAgent(j.at("to_agent").get<int>());
  }
  throw std::invalid_argument("tie_break: expected \"split\" or {to_agent}");
}

}  // namespace

Json ValuationToJson(const Valuation& v) {
  Json j;
  j["family"] = std::string(FamilyName(v.family()));
  switch (v.family()) {
    case ValuationFamily::kLinear:
      j["weights"] = v.weights();
      break;
    case ValuationFamily::kAdditiveConcave: {
      Json curves = Json::array();
      for (const auto& c : v.curves()) {
        curves.push_back({{"xs", c.xs()}, {"ys", c.ys()}});
      }
      j["curves"] = std::move(curves);
      break;
    }
    case ValuationFamily::kMinCoordinate:
      j["dim"] = v.dim();
      j["scale"] = v.scale();
      break;
    case ValuationFamily::kScaledCoordinate:
      j["dim"] = v.dim();
      j["resource"] = v.resource();
      j["scale"] = v.scale();
      break;
    case ValuationFamily::kThresholdLow:
    case ValuationFamily::kThresholdHigh:
      j["dim"] = v.dim();
      j["threshold"] = v.threshold();
      j["value"] = v.scale();
      break;
    case ValuationFamily::kPolyJump:
      j["eps"] = v.eps();
      break;
    case ValuationFamily::kGeometricMean:
      break;
    case ValuationFamily::kBudgetTruncated:
      j["cap"] = Number(v.cap());
      j["inner"] = ValuationToJson(v.inner());
      break;
    case ValuationFamily::kCustom:
      throw std::invalid_argument("custom valuations are not serializable");
  }
  return j;
}

Valuation ValuationFromJson(const Json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "linear") {
    return Valuation::Linear(j.at("weights").get<std::vector<double>>());
  }
  if (family == "additive_concave") {
    std::vector<ConcaveCurve> curves;
    for (const auto& c : j.at("curves")) {
      curves.emplace_back(c.at("xs").get<std::vector<double>>(),
                          c.at("ys").get<std::vector<double>>());
    }
    return Valuation::AdditiveConcave(std::move(curves));
  }
  if (family == "min_coordinate") {
    return Valuation::MinCoordinate(j.at("dim").get<int>(),
                                    j.value("scale", 1.0));
  }
  if (family == "scaled_coordinate") {
    return Valuation::ScaledCoordinate(j.at("dim").get<int>(),
                                       j.at("resource").get<int>(),
                                       j.value("scale", 1.0));
  }
  if (family == "threshold_low") {
    return Valuation::ThresholdLow(j.at("dim").get<int>(),
                                   j.at("threshold").get<double>(),
                                   j.at("value").get<double>());
  }
  if (family == "threshold_high") {
    return Valuation::ThresholdHigh(j.at("dim").get<int>(),
                                    j.at("threshold").get<double>(),
                                    j.at("value").get<double>());
  }
  if (family == "poly_jump") return Valuation::PolyJump(j.at("eps").get<double>());
  if (family == "geometric_mean") return Valuation::GeometricMean();
  if (family == "budget_truncated") {
    return Truncate(ValuationFromJson(j.at("inner")), NumberFrom(j.at("cap")));
  }
  throw std::invalid_argument("unknown valuation family: " + family);
}

Json MatrixToJson(const Matrix& m) { return m.ToRows(); }

Matrix MatrixFromJson(const Json& j) {
  return Matrix::FromRows(j.get<std::vector<std::vector<double>>>());
}

Json MechanismToJson(const Mechanism& mechanism) {
  Json j;
  if (mechanism.polyhedral()) {
    j["kind"] = "polyhedral";
    j["constraints"] = MatrixToJson(mechanism.constraints());
  } else {
    j["kind"] = "standard";
    j["agents"] = mechanism.num_agents();
    j["resources"] = mechanism.num_columns();
  }
  j["tie_break"] = TieBreakToJson(mechanism.tie_break());
  return j;
}

Mechanism MechanismFromJson(const Json& j) {
  const std::string kind = j.value("kind", "standard");
  const TieBreak tie = j.contains("tie_break")
                           ? TieBreakFromJson(j.at("tie_break"))
                           : TieBreak::SplitEqually();
  if (kind == "standard") {
    return Mechanism::Standard(j.at("agents").get<int>(),
                               j.at("resources").get<int>(), tie);
  }
  if (kind == "polyhedral") {
    return Mechanism::Polyhedral(MatrixFromJson(j.at("constraints")), tie);
  }
  throw std::invalid_argument("unknown mechanism kind: " + kind);
}

Json InstanceToJson(const Instance& instance) {
  Json j;
  j["mechanism"] = MechanismToJson(instance.mechanism());
  Json values = Json::array();
  for (const auto& v : instance.valuations()) values.push_back(ValuationToJson(v));
  j["valuations"] = std::move(values);
  if (instance.has_budgets()) {
    Json budgets = Json::array();
    for (double c : *instance.budgets()) budgets.push_back(Number(c));
    j["budgets"] = std::move(budgets);
  }
  return j;
}

Instance InstanceFromJson(const Json& j) {
  std::vector<Valuation> values;
  for (const auto& v : j.at("valuations")) values.push_back(ValuationFromJson(v));
  std::optional<std::vector<double>> budgets;
  if (j.contains("budgets") && !j.at("budgets").is_null()) {
    budgets.emplace();
    for (const auto& c : j.at("budgets")) budgets->push_back(NumberFrom(c));
  }
  return Instance(MechanismFromJson(j.at("mechanism")), std::move(values),
                  std::move(budgets));
}

}  // namespace proplab::harness
