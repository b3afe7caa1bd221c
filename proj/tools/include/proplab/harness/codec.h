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

#ifndef PROPLAB_HARNESS_CODEC_H_
#define PROPLAB_HARNESS_CODEC_H_

#include "json.hpp"
#include "proplab/mechanism.h"
#include "proplab/valuation.h"

namespace proplab::harness {

using Json = nlohmann::json;

// {"family": "linear", "weights": [...]} and so on; custom valuations throw.
Json ValuationToJson(const Valuation& v);
Valuation ValuationFromJson(const Json& j);

// {"kind": "standard", "agents": n, "resources": m, "tie_break": ...} or
// {"kind": "polyhedral", "constraints": [[...]], "tie_break": ...}.
Json MechanismToJson(const Mechanism& mechanism);
Mechanism MechanismFromJson(const Json& j);

// {"mechanism": ..., "valuations": [...], "budgets": [...] (optional)}.
Json InstanceToJson(const Instance& instance);
Instance InstanceFromJson(const Json& j);

Json MatrixToJson(const Matrix& m);
Matrix MatrixFromJson(const Json& j);

}  // namespace proplab::harness

#endif  // PROPLAB_HARNESS_CODEC_H_
